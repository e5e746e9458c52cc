#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <vector>

#include "wavelab/errors.hpp"
#include "wavelab/field_ops.hpp"
#include "wavelab/free_propagator.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/spacetime.hpp"

namespace wavelab {

/// Boost along x1 with speed mu, |mu| < 1.
struct BoostParams {
    double mu;
    double gamma;
    explicit BoostParams(double speed) : mu(speed) {
        if (std::abs(mu) >= 1.0) throw DomainError("boost: |mu| must be < 1");
        gamma = 1.0 / std::sqrt(1.0 - mu * mu);
    }
};

struct Event {
    Vec3 x;
    double t;
};

inline Event boost_coords(const BoostParams& b, const Vec3& x, double t) {
    return {{b.gamma * (x[0] - b.mu * t), x[1], x[2]}, b.gamma * (t - b.mu * x[0])};
}

inline Event inverse_boost_coords(const BoostParams& b, const Vec3& xp, double tp) {
    return {{b.gamma * (xp[0] + b.mu * tp), xp[1], xp[2]}, b.gamma * (tp + b.mu * xp[0])};
}

inline double minkowski_interval(const Vec3& x, double t) {
    return t * t - dot(x, x);
}

namespace detail {

/// Lazily transformed x1-spectra of history snapshots, small LRU.
class X1HistoryCache {
  public:
    explicit X1HistoryCache(const SpaceTimeField& h, std::size_t cap = 16)
        : h_(&h), cap_(cap) {}

    const X1Spectrum& u(std::size_t i) { return fetch(u_, i, false); }
    const X1Spectrum& ut(std::size_t i) { return fetch(ut_, i, true); }

  private:
    const X1Spectrum& fetch(std::map<std::size_t, X1Spectrum>& cache, std::size_t i,
                            bool deriv) {
        auto it = cache.find(i);
        if (it != cache.end()) return it->second;
        if (cache.size() >= cap_) {
            // evict the key farthest from the request: callers may still hold
            // references to neighboring entries
            auto victim = cache.begin();
            std::size_t dist = 0;
            for (auto q = cache.begin(); q != cache.end(); ++q) {
                std::size_t d = q->first > i ? q->first - i : i - q->first;
                if (d > dist) { dist = d; victim = q; }
            }
            cache.erase(victim);
        }
        auto res = cache.emplace(i, to_x1_spectrum(deriv ? h_->ut(i) : h_->u(i)));
        return res.first->second;
    }
    const SpaceTimeField* h_;
    std::size_t cap_;
    std::map<std::size_t, X1Spectrum> u_, ut_;
};

/// Contracts an x1-spectrum buffer at position x1; deriv = 1 applies d/dx1
/// (odd derivative: Nyquist dropped).
inline std::vector<double> contract_x1(const Grid3& g,
                                       const std::vector<std::complex<double>>& vals,
                                       double x1, int deriv) {
    const int N = g.n(), H = N / 2;
    const double base = 2.0 * M_PI / g.side_length();
    std::vector<double> out(std::size_t(N) * N, 0.0);
    for (int kc = 0; kc <= H; ++kc) {
        double w = (kc == 0 || kc == H) ? 1.0 : 2.0;
        std::complex<double> phase;
        if (kc == H)
            phase = {std::cos(base * H * x1), 0.0};
        else
            phase = std::polar(1.0, base * kc * x1);
        if (deriv == 1) {
            if (kc == H) continue;
            phase *= std::complex<double>(0.0, base * kc);
        }
        const std::complex<double>* row = &vals[std::size_t(kc) * N * N];
        double pr = phase.real() * w, pi = phase.imag() * w;
        for (std::size_t n = 0; n < out.size(); ++n)
            out[n] += pr * row[n].real() - pi * row[n].imag();
    }
    return out;
}

/// Hermite combination of the u-spectra of a history at time t.
inline std::vector<std::complex<double>> combined_u_spectrum(const SpaceTimeField& h,
                                                             X1HistoryCache& cache,
                                                             double t) {
    std::size_t i = h.bracket(t);
    HermiteWeights w((t - h.time(i)) / h.dt());
    const auto &sa = cache.u(i).values, &sb = cache.u(i + 1).values;
    const auto &pa = cache.ut(i).values, &pb = cache.ut(i + 1).values;
    std::vector<std::complex<double>> out(sa.size());
    double dt = h.dt();
    for (std::size_t n = 0; n < out.size(); ++n)
        out[n] = w.h00 * sa[n] + w.h01 * sb[n] + dt * (w.h10 * pa[n] + w.h11 * pb[n]);
    return out;
}

/// Cubic Lagrange combination of the ut-spectra at time t.
inline std::vector<std::complex<double>> combined_ut_spectrum(const SpaceTimeField& h,
                                                              X1HistoryCache& cache,
                                                              double t) {
    std::size_t i = h.bracket(t);
    auto [idx, w] = h.lagrange4(t, i);
    std::vector<std::complex<double>> out(cache.ut(idx[0]).values.size());
    for (int m = 0; m < 4; ++m) {
        if (w[m] == 0.0) continue;
        const auto& s = cache.ut(idx[m]).values;
        for (std::size_t n = 0; n < out.size(); ++n) out[n] += w[m] * s[n];
    }
    return out;
}

/// 2-D spectral derivative of an (x2, x3) plane along the given axis (2 or 3).
inline std::vector<double> plane_tangential_deriv(const Grid3& g,
                                                  const std::vector<double>& plane,
                                                  int axis) {
    auto spec = plane_to_spectrum(g, plane);
    const int N = g.n();
    std::size_t m = 0;
    for (int j = 0; j < N; ++j) {
        double xi2 = g.freq(j);
        bool ny2 = g.freq_int(j) == -N / 2;
        for (int kc = 0; kc <= N / 2; ++kc, ++m) {
            double xi3 = 2.0 * M_PI / g.side_length() * kc;
            bool ny3 = kc == N / 2;
            std::complex<double> im(0.0, axis == 2 ? xi2 : xi3);
            spec[m] *= ((axis == 2 && ny2) || (axis == 3 && ny3))
                           ? std::complex<double>(0.0)
                           : im;
        }
    }
    return plane_from_spectrum(g, std::move(spec));
}

}  // namespace detail

/// Valid boosted-time window [t'_lo, t'_hi] such that the lab-frame preimage
/// of every plane |x1'| <= x1_extent lies inside the stored slab.
inline std::pair<double, double> boosted_window(const SpaceTimeField& h,
                                                const BoostParams& b,
                                                double x1_extent) {
    double lo = h.t0() / b.gamma + std::abs(b.mu) * x1_extent;
    double hi = h.t_end() / b.gamma - std::abs(b.mu) * x1_extent;
    return {lo, hi};
}

/// Resamples a lab-frame history into the boosted frame on the original grid:
///   u_L(x', t') = u(gamma(x1' + mu t'), x2', x3', gamma(t' + mu x1')),
/// with the boosted time derivative assembled by the chain rule from the
/// stored (u_t, grad u). Requested t' values outside the valid window raise
/// a DomainError naming the offending lab time.
inline SpaceTimeField boost_field(const SpaceTimeField& h, const BoostParams& b,
                                  double tp0, double dtp, int count) {
    const Grid3& g = h.grid();
    const int N = g.n();
    SpaceTimeField out(g, tp0, dtp);
    detail::X1HistoryCache cache(h);
    for (int s = 0; s < count; ++s) {
        double tp = tp0 + s * dtp;
        RealField uL(g), utL(g);
        for (int i = 0; i < N; ++i) {
            double x1p = g.coord(i);
            double t_lab = b.gamma * (tp + b.mu * x1p);
            if (!h.covers(t_lab))
                throw DomainError("boost_field: preimage t=" + std::to_string(t_lab) +
                                  " outside stored slab at x1'=" + std::to_string(x1p));
            double x1_lab = b.gamma * (x1p + b.mu * tp);
            auto su = detail::combined_u_spectrum(h, cache, t_lab);
            auto st = detail::combined_ut_spectrum(h, cache, t_lab);
            auto u_plane = detail::contract_x1(g, su, x1_lab, 0);
            auto d1_plane = detail::contract_x1(g, su, x1_lab, 1);
            auto ut_plane = detail::contract_x1(g, st, x1_lab, 0);
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k) {
                    std::size_t p = std::size_t(j) * N + k;
                    uL.at(i, j, k) = u_plane[p];
                    utL.at(i, j, k) = b.gamma * (ut_plane[p] + b.mu * d1_plane[p]);
                }
        }
        out.push(std::move(uL), std::move(utL));
    }
    return out;
}

/// Energy integral over the slanted slice t = v x1:
///   int |grad u|^2 + |u_t|^2 dx  sampled plane by plane (flat h^3 weights).
inline double slanted_energy(const SpaceTimeField& h, double v) {
    if (std::abs(v) >= 1.0) throw DomainError("slanted_energy: |v| must be < 1");
    const Grid3& g = h.grid();
    const int N = g.n();
    detail::X1HistoryCache cache(h);
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        double x1 = g.coord(i);
        double t = v * x1;
        if (!h.covers(t))
            throw DomainError("slanted_energy: slice exits slab at x1=" +
                              std::to_string(x1));
        auto su = detail::combined_u_spectrum(h, cache, t);
        auto st = detail::combined_ut_spectrum(h, cache, t);
        auto u_plane = detail::contract_x1(g, su, x1, 0);
        auto d1 = detail::contract_x1(g, su, x1, 1);
        auto ut = detail::contract_x1(g, st, x1, 0);
        auto d2 = detail::plane_tangential_deriv(g, u_plane, 2);
        auto d3 = detail::plane_tangential_deriv(g, u_plane, 3);
        for (std::size_t p = 0; p < u_plane.size(); ++p)
            acc += d1[p] * d1[p] + d2[p] * d2[p] + d3[p] * d3[p] + ut[p] * ut[p];
    }
    return acc * g.cell_volume();
}

/// Slanted-slice energy of the free evolution of `d`, evaluated directly from
/// the spectral propagator (no stored history). One fused sweep per plane.
inline double slanted_energy_free(const CauchyData& d, double v) {
    if (std::abs(v) >= 1.0) throw DomainError("slanted_energy_free: |v| must be < 1");
    const Grid3& g = d.grid();
    const int N = g.n();
    check_budget(g, d.support_radius, std::abs(v) * 0.5 * g.side_length(),
                 "slanted_energy_free");
    SpectralField gh = to_spectral(d.g), fh = to_spectral(d.f);
    const double base = 2.0 * M_PI / g.side_length();
    double acc = 0.0;
    std::vector<std::complex<double>> cu(std::size_t(N) * (N / 2 + 1));
    std::vector<std::complex<double>> cd1(cu.size()), cut(cu.size());
    for (int plane = 0; plane < N; ++plane) {
        double x1 = g.coord(plane);
        double t = v * x1;
        std::fill(cu.begin(), cu.end(), std::complex<double>(0.0));
        std::fill(cd1.begin(), cd1.end(), std::complex<double>(0.0));
        std::fill(cut.begin(), cut.end(), std::complex<double>(0.0));
        std::size_t n = 0;
        for (int i = 0; i < N; ++i) {
            double a = g.freq(i);
            bool ny1 = g.freq_int(i) == -N / 2;
            std::complex<double> ph =
                ny1 ? std::complex<double>(std::cos(a * x1), 0.0)
                    : std::polar(1.0, a * x1);
            std::complex<double> phd =
                ny1 ? std::complex<double>(0.0) : ph * std::complex<double>(0.0, a);
            for (int j = 0; j < N; ++j) {
                double bf = g.freq(j);
                for (int kc = 0; kc <= N / 2; ++kc, ++n) {
                    double c = base * kc;
                    double w = std::sqrt(a * a + bf * bf + c * c);
                    double cw = std::cos(t * w), sw = sinc_mul(t, w);
                    double dw = -w * std::sin(t * w);
                    std::complex<double> gv = gh.values[n], fv = fh.values[n];
                    std::complex<double> uv = cw * gv + sw * fv;
                    std::complex<double> pv = dw * gv + cw * fv;
                    std::size_t m = std::size_t(j) * (N / 2 + 1) + kc;
                    cu[m] += ph * uv;
                    cd1[m] += phd * uv;
                    cut[m] += ph * pv;
                }
            }
        }
        auto u_plane = plane_from_spectrum(g, cu);
        auto d1 = plane_from_spectrum(g, cd1);
        auto ut = plane_from_spectrum(g, cut);
        auto d2 = detail::plane_tangential_deriv(g, u_plane, 2);
        auto d3 = detail::plane_tangential_deriv(g, u_plane, 3);
        for (std::size_t p = 0; p < u_plane.size(); ++p)
            acc += d1[p] * d1[p] + d2[p] * d2[p] + d3[p] * d3[p] + ut[p] * ut[p];
    }
    return acc * g.cell_volume();
}

struct ComparabilityRow {
    int member;
    double v;
    double flat_energy;
    double slanted_energy;
    double ratio;
};

/// Slanted/flat energy ratios of free evolutions over an ensemble.
inline std::vector<ComparabilityRow> energy_comparability_report(
    const std::vector<CauchyData>& ensemble, const std::vector<double>& v_list) {
    std::vector<ComparabilityRow> rows;
    for (std::size_t m = 0; m < ensemble.size(); ++m) {
        double flat = slanted_energy_free(ensemble[m], 0.0);
        for (double v : v_list) {
            double se = slanted_energy_free(ensemble[m], v);
            rows.push_back({int(m), v, flat, se, se / flat});
        }
    }
    return rows;
}

}  // namespace wavelab
