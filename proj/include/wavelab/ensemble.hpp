#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wavelab/errors.hpp"
#include "wavelab/fft.hpp"
#include "wavelab/field_ops.hpp"
#include "wavelab/grid.hpp"

namespace wavelab {

/// C-infinity ramp: 1 for s <= 0, 0 for s >= 1.
inline double smooth_step_down(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    auto f = [](double u) { return std::exp(-1.0 / u); };
    return f(1.0 - s) / (f(1.0 - s) + f(s));
}

/// Radial Gaussian pair: g = Ag exp(-|x-c|^2 / 2 sigma^2), f likewise.
inline CauchyData gaussian_data(const Grid3& grid, double sigma, double amp_g,
                                double amp_f, const Vec3& center = {0, 0, 0}) {
    RealField g(grid), f(grid);
    for (int i = 0; i < grid.n(); ++i)
        for (int j = 0; j < grid.n(); ++j)
            for (int k = 0; k < grid.n(); ++k) {
                Vec3 p = grid.point(i, j, k) - center;
                double e = std::exp(-dot(p, p) / (2.0 * sigma * sigma));
                g.at(i, j, k) = amp_g * e;
                f.at(i, j, k) = amp_f * e;
            }
    CauchyData d(std::move(g), std::move(f));
    d.support_radius = std::min(7.5 * sigma + norm(center), 0.5 * grid.side_length());
    return d;
}

/// One random band-limited bump with compact support: random spectral
/// coefficients on |k| <= kmax smoothly cut off to vanish outside radius
/// r_support, normalized to unit energy norm (||f||_2 + ||g||_H1dot = 1).
inline CauchyData random_bump_data(const Grid3& grid, std::uint64_t seed, int kmax,
                                   double r_support) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int N = grid.n();
    auto draw = [&](RealField& out) {
        SpectralField s(grid);
        for (int i = 0; i < N; ++i) {
            int f1 = grid.freq_int(i);
            for (int j = 0; j < N; ++j) {
                int f2 = grid.freq_int(j);
                for (int kc = 0; kc <= N / 2; ++kc) {
                    if (f1 * f1 + f2 * f2 + kc * kc > kmax * kmax) continue;
                    double decay = 1.0 / (1.0 + f1 * f1 + f2 * f2 + kc * kc);
                    s.at(i, j, kc) = {gauss(rng) * decay, gauss(rng) * decay};
                }
            }
        }
        out = from_spectral(s);  // realness enforced by the c2r transform
    };
    RealField g(grid), f(grid);
    draw(g);
    draw(f);
    double r0 = 0.55 * r_support;
    RealField chi_field(grid);
    double chi_sum = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                double r = norm(grid.point(i, j, k));
                double chi = smooth_step_down((r - r0) / (r_support - r0));
                chi_field.at(i, j, k) = chi;
                chi_sum += chi;
                g.at(i, j, k) *= chi;
                f.at(i, j, k) *= chi;
            }
    // remove the k = 0 atom (a torus artifact with no dispersion) while
    // keeping compact support: subtract a scaled copy of the window
    for (RealField* fld : {&g, &f}) {
        double c = field_mean(*fld) * grid.size() / chi_sum;
        for (std::size_t n = 0; n < fld->values.size(); ++n)
            fld->values[n] -= c * chi_field.values[n];
    }
    CauchyData d(std::move(g), std::move(f));
    double e = energy_norm(d);
    if (e <= 0) throw ConfigError("ensemble: degenerate random bump");
    d.g *= 1.0 / e;
    d.f *= 1.0 / e;
    d.support_radius = r_support;
    return d;
}

enum class DataFamily { Gaussian, RandomBump };

struct EnsembleSpec {
    DataFamily family = DataFamily::RandomBump;
    int size = 1;
    std::uint64_t seed = 1;
    int kmax = 6;
    double r_support = 3.0;
    double sigma = 0.8;  // gaussian family width
};

inline std::vector<CauchyData> make_ensemble(const Grid3& grid, const EnsembleSpec& spec) {
    if (spec.size < 1) throw ConfigError("ensemble: size must be >= 1");
    std::vector<CauchyData> out;
    out.reserve(spec.size);
    for (int i = 0; i < spec.size; ++i) {
        if (spec.family == DataFamily::Gaussian)
            out.push_back(gaussian_data(grid, spec.sigma, 1.0, 1.0));
        else
            out.push_back(random_bump_data(grid, spec.seed + i, spec.kmax, spec.r_support));
    }
    return out;
}

}  // namespace wavelab
