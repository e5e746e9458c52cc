#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace wavelab {

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on Legendre roots).
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

/// Brent root bracket solver.
inline double brent(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-14, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa * fb > 0) throw std::runtime_error("brent: root not bracketed");
    if (std::abs(fa) < std::abs(fb)) { std::swap(a, b); std::swap(fa, fb); }
    double c = a, fc = fa, s = b, d = c;
    bool mflag = true;
    for (int i = 0; i < max_iter && std::abs(b - a) > tol; ++i) {
        if (fa != fc && fb != fc) {
            s = a * fb * fc / ((fa - fb) * (fa - fc)) +
                b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            s = b - fb * (b - a) / (fb - fa);
        }
        double lo = (3 * a + b) / 4, hi = b;
        if (lo > hi) std::swap(lo, hi);
        bool cond = (s < lo || s > hi) ||
                    (mflag && std::abs(s - b) >= std::abs(b - c) / 2) ||
                    (!mflag && std::abs(s - b) >= std::abs(c - d) / 2);
        if (cond) { s = (a + b) / 2; mflag = true; }
        else mflag = false;
        double fs = f(s);
        d = c;
        c = b; fc = fb;
        if (fa * fs < 0) { b = s; fb = fs; }
        else { a = s; fa = fs; }
        if (std::abs(fa) < std::abs(fb)) { std::swap(a, b); std::swap(fa, fb); }
    }
    return b;
}

/// Composite Simpson weights for a uniform grid of n+1 nodes (n segments);
/// odd leftover segment handled by a trapezoid tail.
inline std::vector<double> simpson_weights(std::size_t nodes, double dt) {
    std::vector<double> w(nodes, 0.0);
    if (nodes < 2) return w;
    std::size_t nseg = nodes - 1;
    std::size_t pairs = nseg / 2;
    for (std::size_t p = 0; p < pairs; ++p) {
        w[2 * p] += dt / 3.0;
        w[2 * p + 1] += 4.0 * dt / 3.0;
        w[2 * p + 2] += dt / 3.0;
    }
    if (nseg % 2 == 1) {
        w[nseg - 1] += 0.5 * dt;
        w[nseg] += 0.5 * dt;
    }
    return w;
}

}  // namespace wavelab
