#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "wavelab/field_ops.hpp"
#include "wavelab/fft.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/spacetime.hpp"

namespace wavelab {

/// sin(t*w)/w with the removable singularity at w = 0 evaluated exactly as t.
inline double sinc_mul(double t, double w) {
    double z = t * w;
    if (std::abs(z) < 1e-4) {
        double z2 = z * z;
        return t * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0));
    }
    return std::sin(z) / w;
}

/// Per-mode multipliers of the free wave group at time t.
struct PropagatorMultipliers {
    double t;
    std::vector<double> omega;  // |xi_k| over the r2c lattice
    std::vector<double> cos_mul, sinc_mul_, dsin_mul;

    PropagatorMultipliers(const Grid3& g, double time) : t(time) {
        const int N = g.n();
        omega.reserve(std::size_t(N) * N * (N / 2 + 1));
        for (int i = 0; i < N; ++i) {
            double a = g.freq(i);
            for (int j = 0; j < N; ++j) {
                double b = g.freq(j);
                for (int kc = 0; kc <= N / 2; ++kc) {
                    double c = 2.0 * M_PI / g.side_length() * kc;
                    omega.push_back(std::sqrt(a * a + b * b + c * c));
                }
            }
        }
        cos_mul.resize(omega.size());
        sinc_mul_.resize(omega.size());
        dsin_mul.resize(omega.size());
        for (std::size_t n = 0; n < omega.size(); ++n) {
            double w = omega[n];
            cos_mul[n] = std::cos(t * w);
            sinc_mul_[n] = sinc_mul(t, w);
            dsin_mul[n] = -w * std::sin(t * w);
        }
    }
};

/// Advances a spectral pair (g_hat, f_hat) by time t under the free group:
///   u_hat  = cos(t w) g_hat + sinc(t w) f_hat
///   ut_hat = -w sin(t w) g_hat + cos(t w) f_hat
inline void advance_spectral_pair(const Grid3& g, double t,
                                  SpectralField& gh, SpectralField& fh) {
    const int N = g.n();
    std::size_t n = 0;
    for (int i = 0; i < N; ++i) {
        double a = g.freq(i);
        for (int j = 0; j < N; ++j) {
            double b = g.freq(j);
            for (int kc = 0; kc <= N / 2; ++kc, ++n) {
                double c = 2.0 * M_PI / g.side_length() * kc;
                double w = std::sqrt(a * a + b * b + c * c);
                double cw = std::cos(t * w), sw = sinc_mul(t, w), dw = -w * std::sin(t * w);
                std::complex<double> gv = gh.values[n], fv = fh.values[n];
                gh.values[n] = cw * gv + sw * fv;
                fh.values[n] = dw * gv + cw * fv;
            }
        }
    }
}

/// Exact free evolution (u(t), du/dt(t)) on the periodic grid.
inline CauchyData propagate_free(const CauchyData& d, double t) {
    check_budget(d.grid(), d.support_radius, t, "propagate_free");
    SpectralField gh = to_spectral(d.g), fh = to_spectral(d.f);
    advance_spectral_pair(d.grid(), t, gh, fh);
    CauchyData out(from_spectral(gh), from_spectral(fh));
    out.support_radius = d.support_radius < 0 ? -1.0 : d.support_radius + std::abs(t);
    return out;
}

/// Half-wave group exp(i t sqrt(-Laplace)) on a complex field; unitary on L2.
inline ComplexField half_wave(const ComplexField& f, double t) {
    SpectralFieldC u = to_spectral(f);
    const Grid3& g = f.grid;
    const int N = g.n();
    std::size_t n = 0;
    for (int i = 0; i < N; ++i) {
        double a = g.freq(i);
        for (int j = 0; j < N; ++j) {
            double b = g.freq(j);
            for (int k = 0; k < N; ++k, ++n) {
                double c = g.freq(k);
                double w = std::sqrt(a * a + b * b + c * c);
                u.values[n] *= std::polar(1.0, t * w);
            }
        }
    }
    return from_spectral(u);
}

/// Inhomogeneous Duhamel integral int_0^t sin((t-s)A)/A F(s) ds by composite
/// Simpson over the stored snapshots of F (u component of the history).
inline RealField duhamel_free(const SpaceTimeField& F, double t) {
    if (!F.covers(0.0) || !F.covers(t))
        throw ConfigError("duhamel_free: snapshots do not cover [0, t]");
    const Grid3& g = F.grid();
    // quadrature nodes: snapshot times in [0, t] (t itself contributes zero)
    std::size_t m = F.bracket(t);
    double tm = F.time(m);
    std::size_t nseg = m;  // Simpson over nodes 0..m, then a trapezoid tail to t
    SpectralField acc(g);
    std::vector<double> wts(m + 1, 0.0);
    if (nseg >= 2) {
        std::size_t pairs = nseg / 2;
        for (std::size_t p = 0; p < pairs; ++p) {
            wts[2 * p] += F.dt() / 3.0;
            wts[2 * p + 1] += 4.0 * F.dt() / 3.0;
            wts[2 * p + 2] += F.dt() / 3.0;
        }
        if (nseg % 2 == 1) {  // leftover segment: trapezoid
            wts[nseg - 1] += 0.5 * F.dt();
            wts[nseg] += 0.5 * F.dt();
        }
    } else if (nseg == 1) {
        wts[0] = wts[1] = 0.5 * F.dt();
    }
    const int N = g.n();
    auto add_scaled = [&](const RealField& field, double s, double weight) {
        if (weight == 0.0) return;
        SpectralField fh = to_spectral(field);
        std::size_t n = 0;
        for (int i = 0; i < N; ++i) {
            double a = g.freq(i);
            for (int j = 0; j < N; ++j) {
                double b = g.freq(j);
                for (int kc = 0; kc <= N / 2; ++kc, ++n) {
                    double c = 2.0 * M_PI / g.side_length() * kc;
                    double w = std::sqrt(a * a + b * b + c * c);
                    acc.values[n] += weight * sinc_mul(t - s, w) * fh.values[n];
                }
            }
        }
    };
    for (std::size_t q = 0; q <= m; ++q) add_scaled(F.u(q), F.time(q), wts[q]);
    if (t > tm + 1e-12 * F.dt()) {  // trapezoid on the partial last segment
        RealField ft = F.interpolate_u(t);
        add_scaled(F.u(m), tm, 0.5 * (t - tm));
        add_scaled(ft, t, 0.5 * (t - tm));
    }
    return from_spectral(acc);
}

/// Free energy ||du/dt||^2 + ||grad u||^2 evaluated spectrally.
inline double free_energy(const CauchyData& d) {
    double e1 = sobolev_norm(d.g, 1.0);
    double e2 = l2_norm(d.f);
    return e1 * e1 + e2 * e2;
}

struct DecayRow {
    double t;
    double sup_norm;
    double ratio;  // t * sup / bound_proxy
    bool budget_ok;
};

struct DispersiveReport {
    std::vector<DecayRow> rows;
    double grad_f_l1 = 0.0;  // proxy for the sin-propagator bound
    double lap_g_l1 = 0.0;   // proxy for the cos-propagator bound
    double fitted_loglog_slope = 0.0;  // slope of log sup|u| vs log t
    double fitted_ratio_trend = 0.0;   // slope of log ratio vs log t
    bool compact_support_ok = true;
};

inline std::pair<double, double> fit_line(const std::vector<double>& x,
                                          const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= x.size(); my /= y.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

/// Tabulates t * sup|u(t)| against the L1 bound proxies of the data.
inline DispersiveReport dispersive_decay_report(const CauchyData& d,
                                                const std::vector<double>& t_grid) {
    DispersiveReport rep;
    auto gf = gradient(d.f);
    RealField gnorm(d.grid());
    for (std::size_t n = 0; n < gnorm.values.size(); ++n)
        gnorm.values[n] = std::sqrt(gf[0].values[n] * gf[0].values[n] +
                                    gf[1].values[n] * gf[1].values[n] +
                                    gf[2].values[n] * gf[2].values[n]);
    rep.grad_f_l1 = lp_norm(gnorm, 1.0);
    rep.lap_g_l1 = lp_norm(laplacian(d.g), 1.0);
    rep.compact_support_ok =
        d.support_radius >= 0 &&
        d.support_radius < 0.45 * d.grid().side_length();
    double proxy = rep.grad_f_l1 + rep.lap_g_l1;
    std::vector<double> logt, logsup, logratio;
    double budget = d.support_radius >= 0 ? causality_budget(d.grid(), d.support_radius)
                                          : 0.0;
    SpectralField gh0 = to_spectral(d.g), fh0 = to_spectral(d.f);
    for (double t : t_grid) {
        SpectralField gh = gh0, fh = fh0;
        advance_spectral_pair(d.grid(), t, gh, fh);
        double sup = lp_norm(from_spectral(gh), INFINITY);
        DecayRow row{t, sup, t * sup / proxy, d.support_radius < 0 || std::abs(t) <= budget};
        rep.rows.push_back(row);
        if (t > 0) {
            logt.push_back(std::log(t));
            logsup.push_back(std::log(std::max(sup, 1e-300)));
            logratio.push_back(std::log(std::max(row.ratio, 1e-300)));
        }
    }
    if (logt.size() >= 2) {
        rep.fitted_loglog_slope = fit_line(logt, logsup).first;
        rep.fitted_ratio_trend = fit_line(logt, logratio).first;
    }
    return rep;
}

/// Time-domain check field for the integral identity
///   sin(tA)/A f + int_t^inf cos(sA) f ds = 0:
/// returns sin(tA)/A f + int_t^{t_max} cos(sA) f ds via composite Simpson,
/// whose sup norm is the tail sin(t_max A)/A f (bounded by C ||f||_L1 / t_max).
inline RealField time_integral_identity_residual(const RealField& f, double t,
                                                 double t_max, double ds) {
    const Grid3& g = f.grid;
    SpectralField fh = to_spectral(f);
    std::size_t steps = static_cast<std::size_t>(std::round((t_max - t) / ds));
    if (steps % 2 == 1) ++steps;
    double hstep = (t_max - t) / steps;
    SpectralField acc(g);
    const int N = g.n();
    for (std::size_t q = 0; q <= steps; ++q) {
        double s = t + hstep * q;
        double w = (q == 0 || q == steps) ? hstep / 3.0
                  : (q % 2 == 1 ? 4.0 * hstep / 3.0 : 2.0 * hstep / 3.0);
        std::size_t n = 0;
        for (int i = 0; i < N; ++i) {
            double a = g.freq(i);
            for (int j = 0; j < N; ++j) {
                double b = g.freq(j);
                for (int kc = 0; kc <= N / 2; ++kc, ++n) {
                    double c = 2.0 * M_PI / g.side_length() * kc;
                    double om = std::sqrt(a * a + b * b + c * c);
                    acc.values[n] += w * std::cos(s * om) * fh.values[n];
                }
            }
        }
    }
    std::size_t n = 0;
    for (int i = 0; i < N; ++i) {
        double a = g.freq(i);
        for (int j = 0; j < N; ++j) {
            double b = g.freq(j);
            for (int kc = 0; kc <= N / 2; ++kc, ++n) {
                double c = 2.0 * M_PI / g.side_length() * kc;
                double om = std::sqrt(a * a + b * b + c * c);
                acc.values[n] = sinc_mul(t, om) * fh.values[n] + acc.values[n];
            }
        }
    }
    return from_spectral(acc);
}

}  // namespace wavelab
