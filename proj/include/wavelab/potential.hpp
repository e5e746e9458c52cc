#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wavelab/errors.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/numerics.hpp"

namespace wavelab {

enum class WellKind { SphericalWell, SmoothedWell, InverseConstructed };

/// Radial potential shapes with decay metadata. A Lorentz contraction factor
/// turns V(r) into V(|(s1*x1, x2, x3)|) without resampling.
class PotentialModel {
  public:
    static PotentialModel spherical_well(double depth, double radius) {
        PotentialModel m;
        m.kind_ = WellKind::SphericalWell;
        m.v0_ = depth;
        m.a_ = radius;
        m.sup_norm_ = depth;
        m.decay_alpha_ = std::numeric_limits<double>::infinity();  // compact support
        m.grad_l1_ = std::numeric_limits<double>::infinity();      // boundary jump
        return m;
    }

    /// V(r) = -(V0/2) (1 + tanh((a^2 - r^2)/(2 a w))): boundary softened over
    /// width ~w, tail decaying like exp(-r^2/(a w)), finite ||grad V||_L1.
    /// Even in r, hence analytic in x: the grid representation converges
    /// spectrally (an odd-in-r profile would put a conical kink at the origin).
    static PotentialModel smoothed_well(double depth, double radius, double smoothing) {
        PotentialModel m;
        m.kind_ = WellKind::SmoothedWell;
        m.v0_ = depth;
        m.a_ = radius;
        m.w_ = smoothing;
        m.sup_norm_ = depth;
        m.decay_alpha_ = std::numeric_limits<double>::infinity();
        m.grad_l1_ = m.radial_grad_l1();
        return m;
    }

    /// Potential constructed so that phi(r) = exp(-kappa*s)/s, s = sqrt(1+r^2),
    /// is an exact eigenfunction with eigenvalue E = -kappa^2. Tail decays
    /// like <x>^{-2}; used as an eigensolver oracle, not in perturbed runs.
    static PotentialModel inverse_constructed(double kappa) {
        PotentialModel m;
        m.kind_ = WellKind::InverseConstructed;
        m.kappa_ = kappa;
        m.decay_alpha_ = 2.0;
        m.sup_norm_ = std::abs(m.radial_value(0.0));
        m.grad_l1_ = m.radial_grad_l1();
        return m;
    }

    WellKind kind() const { return kind_; }
    double depth() const { return v0_; }
    double radius() const { return a_; }
    double smoothing() const { return w_; }
    double kappa() const { return kappa_; }
    double sup_norm() const { return sup_norm_; }
    double decay_alpha() const { return decay_alpha_; }
    double grad_l1() const { return grad_l1_; }
    double contraction() const { return s1_; }
    /// Eigenvalue used by the inverse construction.
    double constructed_eigenvalue() const { return -kappa_ * kappa_; }

    double radial_value(double r) const {
        switch (kind_) {
            case WellKind::SphericalWell:
                // midpoint value at the jump: one-sided sampling of the
                // discontinuity otherwise costs integrators a full order
                if (r == a_) return -0.5 * v0_;
                return r < a_ ? -v0_ : 0.0;
            case WellKind::SmoothedWell:
                return -0.5 * v0_ *
                       (1.0 + std::tanh((a_ * a_ - r * r) / (2.0 * a_ * w_)));
            case WellKind::InverseConstructed: {
                double s = std::sqrt(1.0 + r * r);
                double kp = kappa_ + 1.0 / s;
                double lap_over_phi = kp * kp * r * r / (s * s) + r * r / (s * s * s * s) -
                                      kp / (s * s * s) - 2.0 * kp / s;
                return -kappa_ * kappa_ + lap_over_phi;
            }
        }
        return 0.0;
    }

    double radial_derivative(double r) const {
        switch (kind_) {
            case WellKind::SphericalWell:
                return 0.0;  // distributional at r = a
            case WellKind::SmoothedWell: {
                double z = (a_ * a_ - r * r) / (2.0 * a_ * w_);
                if (std::abs(z) > 300.0) return 0.0;
                double c = std::cosh(z);
                return 0.5 * v0_ * r / (a_ * w_ * c * c);
            }
            case WellKind::InverseConstructed: {
                double dr = 1e-6;
                return (radial_value(r + dr) - radial_value(std::max(0.0, r - dr))) /
                       (r < dr ? (r + dr) : 2 * dr);
            }
        }
        return 0.0;
    }

    double value(const Vec3& x) const {
        double r = std::sqrt(s1_ * s1_ * x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        return radial_value(r);
    }

    /// The exact eigenfunction profile of the inverse construction.
    double oracle_profile(double r) const {
        double s = std::sqrt(1.0 + r * r);
        return std::exp(-kappa_ * s) / s;
    }

    /// x -> V(sqrt(1-mu^2) x1, x2, x3): the stationary Hamiltonian shape seen
    /// in the frame comoving with speed mu along x1.
    PotentialModel lorentz_contracted(double mu) const {
        if (std::abs(mu) >= 1.0)
            throw DomainError("lorentz_contracted_potential: |mu| must be < 1");
        PotentialModel m = *this;
        m.s1_ *= std::sqrt(1.0 - mu * mu);
        return m;
    }

  private:
    double radial_grad_l1() const {
        // int |V'(r)| 4 pi r^2 dr, composite Simpson on [0, R]
        double R = a_ + std::max(1.0, 40.0 * w_) + 20.0;
        std::size_t n = 20001;
        double dr = R / (n - 1);
        auto w = simpson_weights(n, dr);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = i * dr;
            acc += w[i] * std::abs(radial_derivative(r)) * 4.0 * M_PI * r * r;
        }
        return acc;
    }

    WellKind kind_ = WellKind::SphericalWell;
    double v0_ = 0.0, a_ = 1.0, w_ = 0.25, kappa_ = 1.0;
    double sup_norm_ = 0.0;
    double decay_alpha_ = 0.0;
    double grad_l1_ = 0.0;
    double s1_ = 1.0;
};

inline RealField sample_potential(const PotentialModel& m, const Grid3& g) {
    RealField out(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k)
                out.at(i, j, k) = m.value(g.point(i, j, k));
    return out;
}

inline double eval_potential(const PotentialModel& m, const Vec3& x) { return m.value(x); }

enum class TrajectoryKind { Linear, PowerlawDecay, SechDecay, Ramp };

/// C1 trajectories with closed-form derivatives. Kinds:
///   linear:   v(t) = mu t
///   powerlaw: v(t) = mu t + eps <t>^{-beta} d
///   sech:     v(t) = mu t + eps sech(t) d
///   ramp:     v(t) = (mu/2)(t + Ts log(2 cosh(t/Ts))): rest -> speed mu
class Trajectory {
  public:
    static Trajectory linear(const Vec3& mu) {
        Trajectory t;
        t.kind_ = TrajectoryKind::Linear;
        t.mu_ = mu;
        t.beta_ = std::numeric_limits<double>::infinity();
        return t;
    }
    static Trajectory powerlaw_decay(const Vec3& mu, double eps, double beta,
                                     const Vec3& dir = {1, 0, 0}) {
        Trajectory t;
        t.kind_ = TrajectoryKind::PowerlawDecay;
        t.mu_ = mu;
        t.eps_ = eps;
        t.beta_ = beta;
        t.dir_ = dir;
        return t;
    }
    static Trajectory sech_decay(const Vec3& mu, double eps, const Vec3& dir = {1, 0, 0}) {
        Trajectory t;
        t.kind_ = TrajectoryKind::SechDecay;
        t.mu_ = mu;
        t.eps_ = eps;
        t.beta_ = std::numeric_limits<double>::infinity();  // beats any power
        t.dir_ = dir;
        return t;
    }
    static Trajectory ramp(const Vec3& mu, double t_scale) {
        Trajectory t;
        t.kind_ = TrajectoryKind::Ramp;
        t.mu_ = mu;
        t.ts_ = t_scale;
        t.beta_ = 0.0;  // |v - mu t| tends to a constant, no decay
        return t;
    }

    TrajectoryKind kind() const { return kind_; }
    const Vec3& asymptotic_velocity() const { return mu_; }
    double decay_beta() const { return beta_; }
    double epsilon() const { return eps_; }

    Vec3 operator()(double t) const {
        switch (kind_) {
            case TrajectoryKind::Linear:
                return t * mu_;
            case TrajectoryKind::PowerlawDecay:
                return t * mu_ + (eps_ * std::pow(1.0 + t * t, -0.5 * beta_)) * dir_;
            case TrajectoryKind::SechDecay:
                return t * mu_ + (eps_ / std::cosh(t)) * dir_;
            case TrajectoryKind::Ramp: {
                double z = t / ts_;
                double soft = std::abs(z) < 30 ? ts_ * std::log(2.0 * std::cosh(z))
                                               : std::abs(t);
                return 0.5 * (t + soft) * mu_;
            }
        }
        return {0, 0, 0};
    }

    Vec3 velocity(double t) const {
        switch (kind_) {
            case TrajectoryKind::Linear:
                return mu_;
            case TrajectoryKind::PowerlawDecay: {
                double d = -beta_ * t * std::pow(1.0 + t * t, -0.5 * beta_ - 1.0);
                return mu_ + (eps_ * d) * dir_;
            }
            case TrajectoryKind::SechDecay: {
                double d = -std::tanh(t) / std::cosh(t);
                return mu_ + (eps_ * d) * dir_;
            }
            case TrajectoryKind::Ramp:
                return 0.5 * (1.0 + std::tanh(t / ts_)) * mu_;
        }
        return {0, 0, 0};
    }

    /// Analytic upper bound for sup_t |v'(t)|.
    double speed_bound() const {
        switch (kind_) {
            case TrajectoryKind::Linear:
                return norm(mu_);
            case TrajectoryKind::PowerlawDecay: {
                // sup_t beta |t| <t>^{-beta-2} at t^2 = 1/(beta+1)
                double tm = 1.0 / std::sqrt(beta_ + 1.0);
                double peak = beta_ * tm * std::pow(1.0 + tm * tm, -0.5 * beta_ - 1.0);
                return norm(mu_) + eps_ * peak;
            }
            case TrajectoryKind::SechDecay:
                return norm(mu_) + 0.5 * eps_;
            case TrajectoryKind::Ramp:
                return norm(mu_);
        }
        return 0.0;
    }

  private:
    TrajectoryKind kind_ = TrajectoryKind::Linear;
    Vec3 mu_{0, 0, 0}, dir_{1, 0, 0};
    double eps_ = 0.0, beta_ = 1.5, ts_ = 1.0;
};

inline double eval_moving_potential(const PotentialModel& m, const Trajectory& traj,
                                    const Vec3& x, double t) {
    return m.value(x - traj(t));
}

struct AdmissibilityResult {
    bool ok = false;
    double measured_speed = 0.0;   // sup of sampled |v'(t)|
    double speed_bound = 0.0;      // analytic ell
    double beta_fit = 0.0;         // least-squares decay exponent of |v - mu t|
    bool exactly_linear = false;
    double violating_t = 0.0;      // where |v'| >= 1, when !ok
};

/// Checks Def-style admissibility on [t0, t1]: sampled speed below 1, and a
/// log-log fit of the deviation from the asymptotic line.
inline AdmissibilityResult admissibility_check(const Trajectory& traj, double t0,
                                               double t1, int samples = 2000) {
    AdmissibilityResult res;
    res.speed_bound = traj.speed_bound();
    double sup = 0.0, sup_t = 0.0, max_dev = 0.0;
    std::vector<double> lx, ly;
    for (int i = 0; i <= samples; ++i) {
        double t = t0 + (t1 - t0) * i / samples;
        double sp = norm(traj.velocity(t));
        if (sp > sup) { sup = sp; sup_t = t; }
        Vec3 dev = traj(t) - t * traj.asymptotic_velocity();
        double dn = norm(dev);
        max_dev = std::max(max_dev, dn);
        if (dn > 1e-14 && std::abs(t) > 0.5) {
            lx.push_back(std::log(std::sqrt(1.0 + t * t)));
            ly.push_back(std::log(dn));
        }
    }
    res.measured_speed = sup;
    res.exactly_linear = max_dev < 1e-12;
    if (lx.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
        mx /= lx.size(); my /= ly.size();
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - mx) * (lx[i] - mx);
            sxy += (lx[i] - mx) * (ly[i] - my);
        }
        res.beta_fit = -sxy / sxx;
    }
    res.ok = sup < 1.0 && res.speed_bound < 1.0;
    if (!res.ok) res.violating_t = sup_t;
    return res;
}

}  // namespace wavelab
