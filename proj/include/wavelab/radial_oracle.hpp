#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "wavelab/errors.hpp"
#include "wavelab/numerics.hpp"

namespace wavelab {

/// 1-D radial problem u'' = (V(r) + l(l+1)/r^2 - E) u, u = r * m(r).
/// Independent of the 3-D grid solver; used as its oracle and by the
/// well-depth sweep.
namespace radial {

/// RK4 integration of the reduced radial equation from r ~ 0 outward.
/// Returns u and u' at r_end. Series start u ~ r^{l+1}.
inline std::pair<double, double> shoot(const std::function<double(double)>& V,
                                       double E, int l, double r_end, double h) {
    double r = h;
    double u = std::pow(r, l + 1);
    double up = (l + 1) * std::pow(r, l);
    auto f = [&](double rr, double uu) {
        double cent = l > 0 ? l * (l + 1) / (rr * rr) : 0.0;
        return (V(rr) + cent - E) * uu;
    };
    while (r < r_end - 0.5 * h) {
        double k1u = up, k1p = f(r, u);
        double k2u = up + 0.5 * h * k1p, k2p = f(r + 0.5 * h, u + 0.5 * h * k1u);
        double k3u = up + 0.5 * h * k2p, k3p = f(r + 0.5 * h, u + 0.5 * h * k2u);
        double k4u = up + h * k3p, k4p = f(r + h, u + h * k3u);
        u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
        up += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        r += h;
        // rescale to avoid overflow in classically forbidden regions
        double m = std::max(std::abs(u), std::abs(up));
        if (m > 1e200) { u /= m; up /= m; }
    }
    return {u, up};
}

/// Exterior-matching defect at r_match, normalized to stay bounded: a bound
/// state satisfies u' + sqrt(-E) u = 0 there. The normalization removes the
/// poles of the raw logarithmic derivative at nodes of u.
inline double match_defect(const std::function<double(double)>& V, double E, int l,
                           double r_match, double h) {
    auto [u, up] = shoot(V, E, l, r_match, h);
    double kappa = std::sqrt(-E);
    return (up + kappa * u) / std::sqrt(u * u + up * up);
}

/// Ground (nodeless) bound-state energy in channel l, or NaN if unbound.
/// Brackets the matching defect over E in (-E_floor, ~0).
inline double bound_state_energy(const std::function<double(double)>& V, int l,
                                 double e_floor, double r_match = 8.0,
                                 double h = 1.0 / 4096.0) {
    double e_lo = -std::abs(e_floor) + 1e-12;
    // scan upward for a sign change of the defect
    const int scans = 400;
    double prev_e = e_lo;
    double prev_d = match_defect(V, prev_e, l, r_match, h);
    for (int i = 1; i <= scans; ++i) {
        double e = e_lo + (i / double(scans)) * (-1e-9 - e_lo);
        double d = match_defect(V, e, l, r_match, h);
        if (std::isfinite(prev_d) && std::isfinite(d) && prev_d * d < 0) {
            return brent([&](double x) { return match_defect(V, x, l, r_match, h); },
                         prev_e, e, 1e-13);
        }
        prev_e = e;
        prev_d = d;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// All bound-state energies in channel l found by the defect scan, ascending.
inline std::vector<double> bound_state_energies(const std::function<double(double)>& V,
                                                int l, double e_floor,
                                                double r_match = 8.0,
                                                double h = 1.0 / 4096.0) {
    std::vector<double> out;
    double e_lo = -std::abs(e_floor) + 1e-12;
    const int scans = 400;
    double prev_e = e_lo;
    double prev_d = match_defect(V, prev_e, l, r_match, h);
    for (int i = 1; i <= scans; ++i) {
        double e = e_lo + (i / double(scans)) * (-1e-9 - e_lo);
        double d = match_defect(V, e, l, r_match, h);
        if (std::isfinite(prev_d) && std::isfinite(d) && prev_d * d < 0) {
            out.push_back(brent(
                [&](double x) { return match_defect(V, x, l, r_match, h); },
                prev_e, e, 1e-13));
        }
        prev_e = e;
        prev_d = d;
    }
    return out;
}

/// Sharp spherical well ground s-state from the transcendental relation
/// k cot(k a) = -kappa with k^2 + kappa^2 = V0. NaN when unbound.
inline double sharp_well_ground_energy(double v0, double a) {
    double kmax = std::sqrt(v0);
    if (kmax * a <= 0.5 * M_PI) return std::numeric_limits<double>::quiet_NaN();
    auto f = [&](double k) {
        return k * std::cos(k * a) / std::sin(k * a) + std::sqrt(v0 - k * k);
    };
    double lo = 0.5 * M_PI / a * (1.0 + 1e-9);
    double hi = std::min(kmax * (1.0 - 1e-12), M_PI / a * (1.0 - 1e-9));
    double k = brent(f, lo, hi, 1e-15);
    return k * k - v0;  // E = -kappa^2 = k^2 - V0
}

}  // namespace radial
}  // namespace wavelab
