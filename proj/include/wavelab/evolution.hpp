#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "wavelab/errors.hpp"
#include "wavelab/field_ops.hpp"
#include "wavelab/free_propagator.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/potential.hpp"
#include "wavelab/spacetime.hpp"

namespace wavelab {

struct EvolveConfig {
    double dt = 1.0 / 64.0;
    int snapshot_stride = 4;
    bool check_admissibility = true;
    bool check_budget = true;
};

namespace detail {

inline RealField sample_moving_potential(const PotentialModel& m, const Trajectory& tr,
                                         const Grid3& g, double t) {
    Vec3 c = tr(t);
    RealField out(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k)
                out.at(i, j, k) = m.value(g.point(i, j, k) - c);
    return out;
}

inline bool is_static(const Trajectory& tr) {
    return tr.kind() == TrajectoryKind::Linear &&
           norm(tr.asymptotic_velocity()) == 0.0;
}

}  // namespace detail

/// Strang-split step: half potential kick on du/dt, exact free step, half
/// kick at the new time. Works for either sign of dt.
class StrangStepper {
  public:
    StrangStepper(const Grid3& g, const PotentialModel& m, const Trajectory& tr)
        : grid_(g), model_(m), traj_(tr), vcache_(g), vcache_t_(NAN),
          static_v_(detail::is_static(tr)) {}

    void step(RealField& u, RealField& p, double t, double dt) {
        kick(u, p, t, 0.5 * dt);
        // exact free step
        SpectralField gh = to_spectral(u), fh = to_spectral(p);
        advance_spectral_pair(grid_, dt, gh, fh);
        u = from_spectral(gh);
        p = from_spectral(fh);
        kick(u, p, t + dt, 0.5 * dt);
    }

    const RealField& potential_at(double t) {
        if (static_v_ && !std::isnan(vcache_t_)) return vcache_;
        if (t != vcache_t_) {
            vcache_ = detail::sample_moving_potential(model_, traj_, grid_, t);
            vcache_t_ = t;
        }
        return vcache_;
    }

  private:
    void kick(RealField& u, RealField& p, double t, double half_dt) {
        const RealField& w = potential_at(t);
        for (std::size_t n = 0; n < p.values.size(); ++n)
            p.values[n] -= half_dt * w.values[n] * u.values[n];
    }

    Grid3 grid_;
    PotentialModel model_;
    Trajectory traj_;
    RealField vcache_;
    double vcache_t_;
    bool static_v_;
};

/// Integrates d^2u/dt^2 - Lap u + V(x - v(t)) u = 0 from t = 0 to t = T
/// (T may be negative), storing every snapshot_stride-th step.
inline SpaceTimeField evolve(const CauchyData& data, const PotentialModel& model,
                             const Trajectory& traj, double T, const EvolveConfig& cfg) {
    const Grid3& g = data.grid();
    if (cfg.check_admissibility) {
        auto adm = admissibility_check(traj, std::min(0.0, T), std::max(0.0, T), 200);
        if (!adm.ok)
            throw ConfigError("evolve: inadmissible trajectory (speed " +
                              std::to_string(adm.measured_speed) + " at t = " +
                              std::to_string(adm.violating_t) + ")");
    }
    if (cfg.check_budget) check_budget(g, data.support_radius, T, "evolve");
    double dt = T >= 0 ? cfg.dt : -cfg.dt;
    long steps = std::lround(std::abs(T) / cfg.dt);
    if (std::abs(steps * cfg.dt - std::abs(T)) > 1e-9)
        throw ConfigError("evolve: T must be a multiple of dt");
    if (steps % cfg.snapshot_stride != 0)
        throw ConfigError("evolve: step count not divisible by snapshot stride");

    StrangStepper stepper(g, model, traj);
    RealField u = data.g, p = data.f;
    std::vector<std::pair<RealField, RealField>> snaps;
    snaps.emplace_back(u, p);
    for (long s = 0; s < steps; ++s) {
        stepper.step(u, p, s * dt, dt);
        if ((s + 1) % cfg.snapshot_stride == 0) snaps.emplace_back(u, p);
    }
    double dve = cfg.snapshot_stride * cfg.dt;
    if (T >= 0) {
        SpaceTimeField out(g, 0.0, dve);
        for (auto& sp : snaps) out.push(std::move(sp.first), std::move(sp.second));
        return out;
    }
    SpaceTimeField out(g, T, dve);
    for (auto it = snaps.rbegin(); it != snaps.rend(); ++it)
        out.push(std::move(it->first), std::move(it->second));
    return out;
}

/// Two-sided history covering [-Tb, Tf], sharing the t = 0 snapshot.
inline SpaceTimeField evolve_two_sided(const CauchyData& data,
                                       const PotentialModel& model,
                                       const Trajectory& traj, double Tb, double Tf,
                                       const EvolveConfig& cfg) {
    SpaceTimeField back = evolve(data, model, traj, -Tb, cfg);
    SpaceTimeField fwd = evolve(data, model, traj, Tf, cfg);
    SpaceTimeField out(data.grid(), -Tb, back.dt());
    for (std::size_t i = 0; i < back.count(); ++i)
        out.push(back.u(i), back.ut(i));
    for (std::size_t i = 1; i < fwd.count(); ++i)
        out.push(fwd.u(i), fwd.ut(i));
    return out;
}

struct PicardReport {
    SpaceTimeField history;
    double max_contraction_ratio = 0.0;
    int total_iterations = 0;
    double window_length = 0.0;

    PicardReport(const Grid3& g, double dtp) : history(g, 0.0, dtp) {}
};

namespace detail {

/// C(H^1) x C(L^2)-style window norm of a snapshot sequence difference.
inline double window_norm(const Grid3& g, const std::vector<SpectralField>& du,
                          const std::vector<SpectralField>& dp) {
    double worst = 0.0;
    const int N = g.n();
    const double L3 = std::pow(g.side_length(), 3);
    for (std::size_t s = 0; s < du.size(); ++s) {
        double h1 = 0.0, l2 = 0.0, pt = 0.0;
        std::size_t n = 0;
        for (int i = 0; i < N; ++i) {
            double a = g.freq(i);
            for (int j = 0; j < N; ++j) {
                double b = g.freq(j);
                for (int kc = 0; kc <= N / 2; ++kc, ++n) {
                    double c = 2.0 * M_PI / g.side_length() * kc;
                    double w2 = a * a + b * b + c * c;
                    double wgt = (kc == 0 || kc == N / 2) ? 1.0 : 2.0;
                    double au = std::norm(du[s].values[n]) * wgt;
                    l2 += au;
                    h1 += w2 * au;
                    pt += std::norm(dp[s].values[n]) * wgt;
                }
            }
        }
        worst = std::max(worst, std::sqrt(L3 * (l2 + h1)) + std::sqrt(L3 * pt));
    }
    return worst;
}

}  // namespace detail

/// Global-in-time fixed-point construction: contraction windows of length
/// below 1/(10 ||V||_inf), Duhamel iteration per window, windows chained by
/// passing the end state. Independent of the splitting scheme.
inline PicardReport picard_solve(const CauchyData& data, const PotentialModel& model,
                                 const Trajectory& traj, double T_total,
                                 int nodes_per_window = 8, double tol = 1e-10,
                                 int max_iter = 60) {
    const Grid3& g = data.grid();
    double vsup = model.sup_norm();
    double wmax = vsup > 0 ? 0.099 / vsup : T_total;
    int nwin = std::max(1, int(std::ceil(T_total / wmax)));
    double Tw = T_total / nwin;
    double dtp = Tw / nodes_per_window;
    const int N = g.n();

    PicardReport rep(g, dtp);
    rep.window_length = Tw;

    // multiplier tables over the r2c lattice for the node offsets q*dtp
    std::size_t nmodes = std::size_t(N) * N * (N / 2 + 1);
    std::vector<std::vector<double>> sinc_tab(nodes_per_window + 1),
        cos_tab(nodes_per_window + 1);
    for (int d = 0; d <= nodes_per_window; ++d) {
        sinc_tab[d].resize(nmodes);
        cos_tab[d].resize(nmodes);
        double tau = d * dtp;
        std::size_t n = 0;
        for (int i = 0; i < N; ++i) {
            double a = g.freq(i);
            for (int j = 0; j < N; ++j) {
                double b = g.freq(j);
                for (int kc = 0; kc <= N / 2; ++kc, ++n) {
                    double c = 2.0 * M_PI / g.side_length() * kc;
                    double w = std::sqrt(a * a + b * b + c * c);
                    sinc_tab[d][n] = sinc_mul(tau, w);
                    cos_tab[d][n] = std::cos(tau * w);
                }
            }
        }
    }

    RealField u0 = data.g, p0 = data.f;
    for (int win = 0; win < nwin; ++win) {
        double t_base = win * Tw;
        // free baseline from the window initial data
        SpectralField gh0 = to_spectral(u0), fh0 = to_spectral(p0);
        std::vector<SpectralField> hu, hp;  // current iterate, spectral
        for (int q = 0; q <= nodes_per_window; ++q) {
            SpectralField gh = gh0, fh = fh0;
            advance_spectral_pair(g, q * dtp, gh, fh);
            hu.push_back(std::move(gh));
            hp.push_back(std::move(fh));
        }
        std::vector<SpectralField> free_u = hu, free_p = hp;

        double prev_diff = -1.0;
        for (int it = 0;; ++it) {
            if (it >= max_iter)
                throw SolverError("picard_solve: window did not converge");
            // forcing F(s) = -V(. - v(s)) h(s), spectral
            std::vector<SpectralField> Fh;
            for (int q = 0; q <= nodes_per_window; ++q) {
                RealField hq = from_spectral(hu[q]);
                RealField vq = detail::sample_moving_potential(model, traj, g,
                                                               t_base + q * dtp);
                for (std::size_t n = 0; n < hq.values.size(); ++n)
                    hq.values[n] *= -vq.values[n];
                Fh.push_back(to_spectral(hq));
            }
            std::vector<SpectralField> nu = free_u, np = free_p;
            for (int q = 1; q <= nodes_per_window; ++q) {
                auto wts = simpson_weights(q + 1, dtp);
                for (int s = 0; s <= q; ++s) {
                    const auto& st = sinc_tab[q - s];
                    const auto& ct = cos_tab[q - s];
                    double wq = wts[s];
                    const auto& Fv = Fh[s].values;
                    auto& nuv = nu[q].values;
                    auto& npv = np[q].values;
                    for (std::size_t n = 0; n < nmodes; ++n) {
                        nuv[n] += wq * st[n] * Fv[n];
                        npv[n] += wq * ct[n] * Fv[n];
                    }
                }
            }
            // window-norm difference against the previous iterate
            std::vector<SpectralField> du, dp;
            for (int q = 0; q <= nodes_per_window; ++q) {
                SpectralField a = nu[q], b = np[q];
                for (std::size_t n = 0; n < a.values.size(); ++n) {
                    a.values[n] -= hu[q].values[n];
                    b.values[n] -= hp[q].values[n];
                }
                du.push_back(std::move(a));
                dp.push_back(std::move(b));
            }
            double diff = detail::window_norm(g, du, dp);
            hu = std::move(nu);
            hp = std::move(np);
            ++rep.total_iterations;
            if (prev_diff > 0 && diff > 1e-14) {
                double ratio = diff / prev_diff;
                rep.max_contraction_ratio = std::max(rep.max_contraction_ratio, ratio);
                if (ratio >= 1.0)
                    throw SolverError("picard_solve: contraction failure, ratio " +
                                      std::to_string(ratio));
            }
            prev_diff = diff;
            if (diff < tol) break;
        }
        // emit snapshots (skip the shared boundary node after the first window)
        for (int q = win == 0 ? 0 : 1; q <= nodes_per_window; ++q)
            rep.history.push(from_spectral(hu[q]), from_spectral(hp[q]));
        u0 = from_spectral(hu[nodes_per_window]);
        p0 = from_spectral(hp[nodes_per_window]);
    }
    return rep;
}

/// u^S(x, t) = u(x + v(t), t): spectral shift of every snapshot.
inline SpaceTimeField shift_to_comoving(const SpaceTimeField& h, const Trajectory& traj) {
    SpaceTimeField out(h.grid(), h.t0(), h.dt());
    for (std::size_t i = 0; i < h.count(); ++i) {
        Vec3 shift = traj(h.time(i));
        SpectralField su = to_spectral(h.u(i)), sp = to_spectral(h.ut(i));
        spectral_shift_inplace(su, shift);
        spectral_shift_inplace(sp, shift);
        out.push(from_spectral(su), from_spectral(sp));
    }
    return out;
}

struct EnergyPoint {
    double t;
    double total;      // |grad u|^2 + |u_t|^2 + V(x - v(t)) |u|^2
    double free_part;  // |grad u|^2 + |u_t|^2
};

/// Per-snapshot total energy of the moving-potential system.
inline std::vector<EnergyPoint> total_energy_series(const SpaceTimeField& h,
                                                    const PotentialModel& model,
                                                    const Trajectory& traj) {
    std::vector<EnergyPoint> out;
    for (std::size_t i = 0; i < h.count(); ++i) {
        double t = h.time(i);
        double grad2 = sobolev_norm(h.u(i), 1.0);
        double pt = l2_norm(h.ut(i));
        RealField v = detail::sample_moving_potential(model, traj, h.grid(), t);
        double pot = 0.0;
        for (std::size_t n = 0; n < v.values.size(); ++n)
            pot += v.values[n] * h.u(i).values[n] * h.u(i).values[n];
        pot *= h.grid().cell_volume();
        out.push_back({t, grad2 * grad2 + pt * pt + pot, grad2 * grad2 + pt * pt});
    }
    return out;
}

}  // namespace wavelab
