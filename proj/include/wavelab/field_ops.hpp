#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "wavelab/fft.hpp"
#include "wavelab/grid.hpp"

namespace wavelab {

inline double inner(const RealField& a, const RealField& b) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.values.size(); ++n) s += a.values[n] * b.values[n];
    return s * a.grid.cell_volume();
}

inline double l2_norm(const RealField& f) { return std::sqrt(inner(f, f)); }

inline double lp_norm(const RealField& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (double v : f.values) s += std::pow(std::abs(v), p);
    return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

inline double l2_norm(const ComplexField& f) {
    double s = 0.0;
    for (auto& v : f.values) s += std::norm(v);
    return std::sqrt(s * f.grid.cell_volume());
}

inline double field_mean(const RealField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s / f.grid.size();
}

/// Homogeneous Sobolev norm (sum_k |xi_k|^{2s} |u_hat|^2)^(1/2), scaled so
/// that s = 0 reproduces the L2 quadrature norm. The xi = 0 term is dropped
/// for s != 0; for s < 0 a nonzero-mean field sets *mean_warning.
inline double sobolev_norm(const RealField& f, double s, bool* mean_warning = nullptr) {
    SpectralField u = to_spectral(f);
    const Grid3& g = f.grid;
    const int N = g.n();
    const double L3 = g.side_length() * g.side_length() * g.side_length();
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        double xi1 = g.freq(i);
        for (int j = 0; j < N; ++j) {
            double xi2 = g.freq(j);
            for (int kc = 0; kc <= N / 2; ++kc) {
                double xi3 = 2.0 * M_PI / g.side_length() * kc;
                double w2 = xi1 * xi1 + xi2 * xi2 + xi3 * xi3;
                double a2 = std::norm(u.at(i, j, kc)) * u.weight(kc);
                if (w2 == 0.0) {
                    if (s == 0.0)
                        acc += a2;
                    else if (s < 0.0 && mean_warning && a2 > 1e-28)
                        *mean_warning = true;
                    continue;
                }
                acc += std::pow(w2, s) * a2;
            }
        }
    }
    return std::sqrt(L3 * acc);
}

/// ||f||_{L^2} + ||g||_{H^1-dot}: the data norm every estimate is measured against.
inline double energy_norm(const CauchyData& d) {
    return l2_norm(d.f) + sobolev_norm(d.g, 1.0);
}

inline std::array<RealField, 3> gradient(const RealField& f) {
    SpectralField u = to_spectral(f);
    const Grid3& g = f.grid;
    const int N = g.n();
    std::array<RealField, 3> out{RealField(g), RealField(g), RealField(g)};
    for (int axis = 0; axis < 3; ++axis) {
        SpectralField d(g);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int kc = 0; kc <= N / 2; ++kc) {
                    // odd derivative: zero out the unpaired Nyquist mode
                    int f1 = g.freq_int(i), f2 = g.freq_int(j);
                    double xi;
                    bool nyq;
                    if (axis == 0) { xi = g.freq(i); nyq = (f1 == -N / 2); }
                    else if (axis == 1) { xi = g.freq(j); nyq = (f2 == -N / 2); }
                    else { xi = 2.0 * M_PI / g.side_length() * kc; nyq = (kc == N / 2); }
                    std::complex<double> v = u.at(i, j, kc);
                    d.at(i, j, kc) = nyq ? std::complex<double>(0.0)
                                         : std::complex<double>(0.0, xi) * v;
                }
        out[axis] = from_spectral(d);
    }
    return out;
}

inline RealField laplacian(const RealField& f) {
    SpectralField u = to_spectral(f);
    const Grid3& g = f.grid;
    const int N = g.n();
    for (int i = 0; i < N; ++i) {
        double a = g.freq(i);
        bool ny1 = g.freq_int(i) == -N / 2;
        for (int j = 0; j < N; ++j) {
            double b = g.freq(j);
            bool ny2 = g.freq_int(j) == -N / 2;
            for (int kc = 0; kc <= N / 2; ++kc) {
                double c = 2.0 * M_PI / g.side_length() * kc;
                // per-axis Nyquist terms dropped so laplacian == div(gradient)
                double m = (ny1 ? 0.0 : a * a) + (ny2 ? 0.0 : b * b) +
                           (kc == N / 2 ? 0.0 : c * c);
                u.at(i, j, kc) *= -m;
            }
        }
    }
    return from_spectral(u);
}

/// Hard spectral truncation to |k| <= kmax (integer lattice radius); also
/// clears the unpaired Nyquist rows, making shifts exactly invertible.
inline RealField band_limit(const RealField& f, int kmax) {
    SpectralField u = to_spectral(f);
    const Grid3& g = f.grid;
    const int N = g.n();
    for (int i = 0; i < N; ++i) {
        int f1 = g.freq_int(i);
        for (int j = 0; j < N; ++j) {
            int f2 = g.freq_int(j);
            for (int kc = 0; kc <= N / 2; ++kc)
                if (f1 * f1 + f2 * f2 + kc * kc > kmax * kmax ||
                    f1 == -N / 2 || f2 == -N / 2 || kc == N / 2)
                    u.at(i, j, kc) = 0.0;
        }
    }
    return from_spectral(u);
}

/// Spectral phase shift: returns x -> f(x + dx), exact for the trig
/// interpolant of band-limited fields. The unpaired Nyquist rows follow the
/// cosine (real) convention: value-exact for lattice shifts, but a shift and
/// its inverse compose to the identity only on the band-limited subspace.
inline void spectral_shift_inplace(SpectralField& u, const Vec3& dx) {
    const Grid3& g = u.grid;
    const int N = g.n();
    const double base = 2.0 * M_PI / g.side_length();
    std::vector<std::complex<double>> ph1(N), ph2(N), ph3(N / 2 + 1);
    std::vector<double> cs1(N), cs2(N);
    for (int i = 0; i < N; ++i) {
        ph1[i] = std::polar(1.0, g.freq(i) * dx[0]);
        ph2[i] = std::polar(1.0, g.freq(i) * dx[1]);
        cs1[i] = std::cos(g.freq(i) * dx[0]);
        cs2[i] = std::cos(g.freq(i) * dx[1]);
    }
    for (int kc = 0; kc <= N / 2; ++kc) ph3[kc] = std::polar(1.0, base * kc * dx[2]);
    double cs3 = std::cos(base * (N / 2) * dx[2]);
    for (int i = 0; i < N; ++i) {
        bool ny1 = g.freq_int(i) == -N / 2;
        for (int j = 0; j < N; ++j) {
            bool ny2 = g.freq_int(j) == -N / 2;
            for (int kc = 0; kc <= N / 2; ++kc) {
                std::complex<double> p(1.0, 0.0);
                p *= ny1 ? std::complex<double>(cs1[i]) : ph1[i];
                p *= ny2 ? std::complex<double>(cs2[j]) : ph2[j];
                p *= (kc == N / 2) ? std::complex<double>(cs3) : ph3[kc];
                u.at(i, j, kc) *= p;
            }
        }
    }
}

inline RealField shifted(const RealField& f, const Vec3& dx) {
    SpectralField u = to_spectral(f);
    spectral_shift_inplace(u, dx);
    return from_spectral(u);
}

/// Zero-padded spectral upsampling onto a grid with factor*N points per axis.
/// Unpaired Nyquist rows are split half-and-half between +-N/2 on the fine grid.
inline RealField upsample(const RealField& f, int factor) {
    if (factor == 1) return f;
    const Grid3& g = f.grid;
    Grid3 fine(g.side_length(), g.n() * factor);
    SpectralField u = to_spectral(f);
    SpectralField v(fine);
    const int N = g.n(), M = fine.n();
    auto targets = [N, M](int fi) {
        std::array<std::pair<int, double>, 2> t{};
        if (fi == -N / 2) {
            t[0] = {M - N / 2, 0.5};
            t[1] = {N / 2, 0.5};
            return std::pair<decltype(t), int>(t, 2);
        }
        t[0] = {fi >= 0 ? fi : fi + M, 1.0};
        return std::pair<decltype(t), int>(t, 1);
    };
    for (int i = 0; i < N; ++i) {
        auto ti = targets(g.freq_int(i));
        for (int j = 0; j < N; ++j) {
            auto tj = targets(g.freq_int(j));
            for (int kc = 0; kc <= N / 2; ++kc) {
                std::complex<double> val = u.at(i, j, kc);
                // kc = N/2 lands on a regular paired column of the fine grid;
                // its implicit conjugate partner restores the other half.
                double wk = (kc == N / 2) ? 0.5 : 1.0;
                for (int a = 0; a < ti.second; ++a)
                    for (int b = 0; b < tj.second; ++b)
                        v.at(ti.first[a].first, tj.first[b].first, kc) +=
                            val * (ti.first[a].second * tj.first[b].second * wk);
            }
        }
    }
    return from_spectral(v);
}

/// Evaluates the plane x1 = x1_value of the x1-trig interpolant:
/// out(j,k) = sum_{k1} u_hat(k1,j,k) exp(i xi_{k1} x1).
inline std::vector<double> plane_at_x1(const X1Spectrum& s, double x1_value) {
    const Grid3& g = s.grid;
    const int N = g.n(), H = N / 2;
    const double base = 2.0 * M_PI / g.side_length();
    std::vector<std::complex<double>> ph(H + 1);
    for (int kc = 0; kc <= H; ++kc) ph[kc] = std::polar(1.0, base * kc * x1_value);
    std::vector<double> out(std::size_t(N) * N, 0.0);
    for (int kc = 0; kc <= H; ++kc) {
        // interior modes carry their conjugate pair; DC and the unpaired
        // Nyquist mode (cosine convention) count once
        double w = (kc == 0 || kc == H) ? 1.0 : 2.0;
        std::complex<double> phase = (kc == H)
            ? std::complex<double>(std::cos(base * H * x1_value), 0.0)
            : ph[kc];
        const std::complex<double>* row = &s.values[s.index(kc, 0, 0)];
        double pr = phase.real() * w, pi = phase.imag() * w;
        for (std::size_t n = 0; n < out.size(); ++n)
            out[n] += pr * row[n].real() - pi * row[n].imag();
    }
    return out;
}

/// Periodic Lagrange interpolation of order `points` per axis (default 6).
class LagrangeInterp {
  public:
    explicit LagrangeInterp(const RealField& f, int points = 6)
        : f_(&f), np_(points) {}

    double operator()(const Vec3& x) const {
        const Grid3& g = f_->grid;
        const int N = g.n();
        std::array<std::array<double, 8>, 3> w{};
        std::array<std::array<int, 8>, 3> idx{};
        for (int a = 0; a < 3; ++a) {
            double u = (x[a] + 0.5 * g.side_length()) / g.spacing();
            int i0 = static_cast<int>(std::floor(u)) - (np_ / 2 - 1);
            for (int m = 0; m < np_; ++m) {
                int im = i0 + m;
                idx[a][m] = ((im % N) + N) % N;
                double lm = 1.0;
                for (int q = 0; q < np_; ++q)
                    if (q != m) lm *= (u - (i0 + q)) / double(m - q);
                w[a][m] = lm;
            }
        }
        double s = 0.0;
        for (int mi = 0; mi < np_; ++mi)
            for (int mj = 0; mj < np_; ++mj) {
                double wij = w[0][mi] * w[1][mj];
                for (int mk = 0; mk < np_; ++mk)
                    s += wij * w[2][mk] * f_->at(idx[0][mi], idx[1][mj], idx[2][mk]);
            }
        return s;
    }

  private:
    const RealField* f_;
    int np_;
};

}  // namespace wavelab
