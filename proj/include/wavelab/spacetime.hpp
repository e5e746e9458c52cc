#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "wavelab/errors.hpp"
#include "wavelab/field_ops.hpp"
#include "wavelab/grid.hpp"

namespace wavelab {

/// Cubic Hermite basis on [0,1].
struct HermiteWeights {
    double h00, h10, h01, h11;
    explicit HermiteWeights(double s) {
        double s2 = s * s, s3 = s2 * s;
        h00 = 2 * s3 - 3 * s2 + 1;
        h10 = s3 - 2 * s2 + s;
        h01 = -2 * s3 + 3 * s2;
        h11 = s3 - s2;
    }
};

/// Time-stamped sequence of (u, du/dt) snapshots on a uniform time grid.
/// Time interpolation: cubic Hermite for u (uses the stored derivative),
/// 4-point cubic Lagrange for du/dt.
class SpaceTimeField {
  public:
    SpaceTimeField(const Grid3& grid, double t0, double dt)
        : grid_(grid), t0_(t0), dt_(dt) {
        if (!(dt > 0)) throw ConfigError("spacetime: dt must be positive");
    }

    void push(RealField u, RealField ut) {
        if (u.grid != grid_ || ut.grid != grid_)
            throw ConfigError("spacetime: snapshot grid mismatch");
        u_.push_back(std::move(u));
        ut_.push_back(std::move(ut));
    }

    const Grid3& grid() const { return grid_; }
    double t0() const { return t0_; }
    double dt() const { return dt_; }
    std::size_t count() const { return u_.size(); }
    double time(std::size_t i) const { return t0_ + dt_ * i; }
    double t_end() const { return time(count() - 1); }

    const RealField& u(std::size_t i) const { return u_[i]; }
    const RealField& ut(std::size_t i) const { return ut_[i]; }

    bool covers(double t) const {
        return count() >= 2 && t >= t0_ - 1e-12 * dt_ && t <= t_end() + 1e-12 * dt_;
    }

    /// Bracketing interval index for time t (clamped to valid range).
    std::size_t bracket(double t) const {
        if (!covers(t)) throw DomainError("spacetime: t outside stored slab");
        double s = (t - t0_) / dt_;
        auto i = static_cast<std::ptrdiff_t>(std::floor(s));
        i = std::max<std::ptrdiff_t>(0, std::min<std::ptrdiff_t>(i, count() - 2));
        return static_cast<std::size_t>(i);
    }

    RealField interpolate_u(double t) const {
        std::size_t i = bracket(t);
        HermiteWeights w((t - time(i)) / dt_);
        RealField out(grid_);
        const auto &ua = u_[i].values, &ub = u_[i + 1].values;
        const auto &pa = ut_[i].values, &pb = ut_[i + 1].values;
        for (std::size_t n = 0; n < out.values.size(); ++n)
            out.values[n] = w.h00 * ua[n] + w.h01 * ub[n] +
                            dt_ * (w.h10 * pa[n] + w.h11 * pb[n]);
        return out;
    }

    RealField interpolate_ut(double t) const {
        std::size_t i = bracket(t);
        auto [idx, w] = lagrange4(t, i);
        RealField out(grid_);
        for (int m = 0; m < 4; ++m) {
            if (w[m] == 0.0) continue;
            const auto& pm = ut_[idx[m]].values;
            for (std::size_t n = 0; n < out.values.size(); ++n)
                out.values[n] += w[m] * pm[n];
        }
        return out;
    }

    /// Point probe u(x, t): Lagrange in space on Hermite-combined stencils.
    double probe_u(const Vec3& x, double t, int points = 6) const {
        std::size_t i = bracket(t);
        HermiteWeights w((t - time(i)) / dt_);
        LagrangeInterp ua(u_[i], points), ub(u_[i + 1], points);
        LagrangeInterp pa(ut_[i], points), pb(ut_[i + 1], points);
        return w.h00 * ua(x) + w.h01 * ub(x) + dt_ * (w.h10 * pa(x) + w.h11 * pb(x));
    }

    double probe_ut(const Vec3& x, double t, int points = 6) const {
        std::size_t i = bracket(t);
        auto [idx, w] = lagrange4(t, i);
        double s = 0.0;
        for (int m = 0; m < 4; ++m) {
            if (w[m] == 0.0) continue;
            s += w[m] * LagrangeInterp(ut_[idx[m]], points)(x);
        }
        return s;
    }

    /// 4-point Lagrange stencil around bracket i, clamped at the ends.
    std::pair<std::array<std::size_t, 4>, std::array<double, 4>> lagrange4(
        double t, std::size_t i) const {
        std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(i) - 1;
        lo = std::max<std::ptrdiff_t>(0, std::min<std::ptrdiff_t>(lo, count() - 4));
        if (count() < 4) lo = 0;
        int np = static_cast<int>(std::min<std::size_t>(4, count()));
        std::array<std::size_t, 4> idx{};
        std::array<double, 4> w{};
        for (int m = 0; m < np; ++m) {
            idx[m] = lo + m;
            double lm = 1.0;
            for (int q = 0; q < np; ++q)
                if (q != m) lm *= (t - time(lo + q)) / (time(lo + m) - time(lo + q));
            w[m] = lm;
        }
        return {idx, w};
    }

  private:
    Grid3 grid_;
    double t0_, dt_;
    std::vector<RealField> u_, ut_;
};

}  // namespace wavelab
