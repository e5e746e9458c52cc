#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "wavelab/errors.hpp"

namespace wavelab {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Periodic cube [-L/2, L/2)^3 sampled at N points per axis, N a power of two.
/// Frequencies are the angular lattice xi_k = 2*pi*k/L, k in [-N/2, N/2).
class Grid3 {
  public:
    Grid3(double side_length, int points_per_axis)
        : L_(side_length), N_(points_per_axis) {
        if (N_ < 8 || (N_ & (N_ - 1)) != 0)
            throw ConfigError("grid: N must be a power of two, N >= 8");
        if (!(L_ > 0)) throw ConfigError("grid: side length must be positive");
        h_ = L_ / N_;  // exact: N is a power of two
    }

    double side_length() const { return L_; }
    int n() const { return N_; }
    double spacing() const { return h_; }
    std::size_t size() const { return std::size_t(N_) * N_ * N_; }
    double cell_volume() const { return h_ * h_ * h_; }

    /// Node coordinate along one axis, index in [0, N): x_i = -L/2 + i*h.
    double coord(int i) const { return -0.5 * L_ + h_ * i; }
    Vec3 point(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }

    std::size_t index(int i, int j, int k) const {
        return (std::size_t(i) * N_ + j) * N_ + k;
    }

    /// Signed frequency integer for row index i (i.e. i mapped to [-N/2, N/2)).
    int freq_int(int i) const { return i < N_ / 2 ? i : i - N_; }
    /// Angular frequency for row index i.
    double freq(int i) const { return 2.0 * M_PI / L_ * freq_int(i); }

    bool operator==(const Grid3& o) const { return N_ == o.N_ && L_ == o.L_; }
    bool operator!=(const Grid3& o) const { return !(*this == o); }

  private:
    double L_;
    int N_;
    double h_;
};

/// Real scalar field sampled on a Grid3, row-major (x1 slowest).
struct RealField {
    Grid3 grid;
    std::vector<double> values;

    explicit RealField(const Grid3& g) : grid(g), values(g.size(), 0.0) {}
    RealField(const Grid3& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != g.size()) throw ConfigError("field: value count != N^3");
    }

    double& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
    double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }

    RealField& operator+=(const RealField& o) {
        for (std::size_t n = 0; n < values.size(); ++n) values[n] += o.values[n];
        return *this;
    }
    RealField& operator-=(const RealField& o) {
        for (std::size_t n = 0; n < values.size(); ++n) values[n] -= o.values[n];
        return *this;
    }
    RealField& operator*=(double s) {
        for (auto& v : values) v *= s;
        return *this;
    }
};

inline RealField operator*(double s, RealField f) {
    f *= s;
    return f;
}

/// Complex scalar field (used by the half-wave evolution).
struct ComplexField {
    Grid3 grid;
    std::vector<std::complex<double>> values;

    explicit ComplexField(const Grid3& g) : grid(g), values(g.size(), {0.0, 0.0}) {}
};

/// Initial pair (g, f): position and velocity of the wave field at t = 0.
/// support_radius, when nonnegative, is the radius of a ball containing the
/// data; it feeds the causality budget check.
struct CauchyData {
    RealField g;
    RealField f;
    double support_radius = -1.0;

    CauchyData(RealField g_, RealField f_) : g(std::move(g_)), f(std::move(f_)) {
        if (g.grid != f.grid) throw ConfigError("cauchy data: g and f on different grids");
    }
    const Grid3& grid() const { return g.grid; }
};

/// Largest |t| for which box-periodization artifacts cannot reach data
/// supported in a ball of radius R (finite propagation speed).
inline double causality_budget(const Grid3& grid, double support_radius) {
    return 0.5 * grid.side_length() - support_radius;
}

inline void check_budget(const Grid3& grid, double support_radius, double t,
                         const char* where) {
    if (support_radius < 0) return;  // unknown support: caller opted out
    if (std::abs(t) > causality_budget(grid, support_radius))
        throw ConfigError(std::string(where) + ": causality budget violated (|t|=" +
                          std::to_string(std::abs(t)) + ", budget=" +
                          std::to_string(causality_budget(grid, support_radius)) + ")");
}

/// Radius of the smallest origin-centered ball outside which both components
/// stay below rel_tol * max amplitude.
inline double support_radius(const CauchyData& d, double rel_tol = 1e-12) {
    double peak = 0.0;
    for (double v : d.g.values) peak = std::max(peak, std::abs(v));
    for (double v : d.f.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    const Grid3& g = d.grid();
    double r2max = 0.0;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k) {
                std::size_t idx = g.index(i, j, k);
                if (std::abs(d.g.values[idx]) > rel_tol * peak ||
                    std::abs(d.f.values[idx]) > rel_tol * peak) {
                    Vec3 p = g.point(i, j, k);
                    r2max = std::max(r2max, dot(p, p));
                }
            }
    return std::sqrt(r2max);
}

}  // namespace wavelab
