#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wavelab/errors.hpp"
#include "wavelab/field_ops.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/potential.hpp"
#include "wavelab/radial_oracle.hpp"

namespace wavelab {

/// H = -Laplace + V on the periodic grid; V sampled once at construction.
class HamiltonianHandle {
  public:
    HamiltonianHandle(const Grid3& grid, const PotentialModel& model)
        : grid_(grid), v_(sample_potential(model, grid)), model_(model) {}
    HamiltonianHandle(const Grid3& grid, RealField v_sampled)
        : grid_(grid), v_(std::move(v_sampled)),
          model_(PotentialModel::spherical_well(0.0, 1.0)) {}

    const Grid3& grid() const { return grid_; }
    const RealField& potential_field() const { return v_; }
    const PotentialModel& model() const { return model_; }

    RealField apply(const RealField& u) const {
        RealField out = laplacian(u);
        for (std::size_t n = 0; n < out.values.size(); ++n)
            out.values[n] = -out.values[n] + v_.values[n] * u.values[n];
        return out;
    }

  private:
    Grid3 grid_;
    RealField v_;
    PotentialModel model_;
};

/// Normalized eigenpair of the discretized H with negative eigenvalue.
struct BoundState {
    RealField m;
    double eigenvalue;           // -lambda^2 < 0
    double lambda;               // sqrt(-E)
    double residual;             // ||H m - E m||_L2
    double exterior_decay_rate;  // fitted slope of log(|m| r) vs r outside the well
};

namespace detail {

/// (-Laplace + c)^{-1}, the LOBPCG preconditioner.
inline RealField helmholtz_solve(const RealField& rhs, double c) {
    SpectralField u = to_spectral(rhs);
    const Grid3& g = rhs.grid;
    const int N = g.n();
    std::size_t n = 0;
    for (int i = 0; i < N; ++i) {
        double a = g.freq(i);
        for (int j = 0; j < N; ++j) {
            double b = g.freq(j);
            for (int kc = 0; kc <= N / 2; ++kc, ++n) {
                double cc = 2.0 * M_PI / g.side_length() * kc;
                u.values[n] /= (a * a + b * b + cc * cc + c);
            }
        }
    }
    return from_spectral(u);
}

}  // namespace detail

/// Lowest eigenpairs of H by blocked LOBPCG with a spectral Helmholtz
/// preconditioner. Returns eigenpairs with E < -neg_threshold sorted ascending
/// (possibly empty). Residual target is per-state in the L2 norm.
/// neg_threshold sits above the box artifact scale: any attractive V drags a
/// delocalized near-constant mode to E ~ mean(V) < 0, which is not a bound
/// state of the continuum problem.
inline std::vector<BoundState> bound_states(const HamiltonianHandle& H, int max_count,
                                            double tol = 1e-9, int max_iter = 600,
                                            double neg_threshold = 0.05) {
    using Mat = Eigen::MatrixXd;
    const Grid3& g = H.grid();
    const std::size_t n = g.size();
    const int nb = max_count + 1;  // one guard vector for separation
    const double vol = g.cell_volume();
    double precond_c = std::max(0.5, 0.5 * lp_norm(H.potential_field(), INFINITY));

    auto apply_block = [&](const Mat& X) {
        Mat out(n, X.cols());
        for (int c = 0; c < X.cols(); ++c) {
            RealField u(g);
            Eigen::VectorXd::Map(u.values.data(), n) = X.col(c);
            RealField hu = H.apply(u);
            out.col(c) = Eigen::VectorXd::Map(hu.values.data(), n);
        }
        return out;
    };
    auto precond_block = [&](const Mat& R) {
        Mat out(n, R.cols());
        for (int c = 0; c < R.cols(); ++c) {
            RealField u(g);
            Eigen::VectorXd::Map(u.values.data(), n) = R.col(c);
            RealField tu = detail::helmholtz_solve(u, precond_c);
            out.col(c) = Eigen::VectorXd::Map(tu.values.data(), n);
        }
        return out;
    };
    // symmetric orthonormalization, dropping near-dependent directions
    auto orthonormalize = [&](Mat& S) {
        Mat gram = S.transpose() * S;
        Eigen::SelfAdjointEigenSolver<Mat> es(gram);
        double gmax = es.eigenvalues().maxCoeff();
        std::vector<int> keep;
        for (int i = 0; i < gram.rows(); ++i)
            if (es.eigenvalues()(i) > 1e-12 * gmax) keep.push_back(i);
        Mat T(gram.rows(), keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i)
            T.col(i) = es.eigenvectors().col(keep[i]) /
                       std::sqrt(es.eigenvalues()(keep[i]));
        S = S * T;
    };

    // deterministic pseudo-random start block
    Mat X(n, nb);
    {
        std::uint64_t s = 0x2545F4914F6CDD1Dull;
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < nb; ++c) {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                X(i, c) = (double((s >> 11) & 0xFFFFFFFFull) / double(0xFFFFFFFFull)) - 0.5;
            }
        // seed the block with smooth decaying profiles to speed convergence
        for (int c = 0; c < nb; ++c) {
            RealField u(g);
            Eigen::VectorXd::Map(u.values.data(), n) = X.col(c);
            u = detail::helmholtz_solve(u, 0.3 + 0.3 * c);
            X.col(c) = Eigen::VectorXd::Map(u.values.data(), n);
        }
    }
    orthonormalize(X);
    Mat HX = apply_block(X);
    Mat P(n, 0), HP(n, 0);

    Eigen::VectorXd theta(nb);
    std::vector<double> res_history;
    for (int it = 0; it < max_iter; ++it) {
        Mat xhx = X.transpose() * HX;
        for (int c = 0; c < nb; ++c) theta(c) = xhx(c, c);
        Mat R = HX - X * theta.asDiagonal();
        // only candidates with negative Ritz values gate convergence: vectors
        // at the continuum edge wander inside near-degenerate box clusters and
        // are not part of the answer (the radial depth sweep cross-checks the
        // bound-state count independently)
        double worst = 0.0;
        bool any_negative = false;
        for (int c = 0; c < std::min(nb, max_count); ++c) {
            if (theta(c) >= -neg_threshold) continue;
            any_negative = true;
            double rn = R.col(c).norm() * std::sqrt(vol);
            worst = std::max(worst, rn > tol ? rn : 0.0);
        }
        res_history.push_back(worst);
        if (worst == 0.0 && (any_negative || it >= 12)) break;
        if (it == max_iter - 1) {
            std::string hist;
            for (std::size_t q = res_history.size() > 8 ? res_history.size() - 8 : 0;
                 q < res_history.size(); ++q)
                hist += " " + std::to_string(res_history[q]);
            throw SolverError("bound_states: no convergence after iteration cap;"
                              " recent residuals:" + hist);
        }

        Mat W = precond_block(R);
        for (int c = 0; c < W.cols(); ++c) {
            double nn = W.col(c).norm();
            if (nn > 0) W.col(c) /= nn;
        }
        Mat S(n, nb + W.cols() + P.cols());
        S << X, W, P;
        orthonormalize(S);
        orthonormalize(S);  // second pass restores orthogonality lost to roundoff
        Mat HS = apply_block(S);
        Mat A = S.transpose() * HS;
        A = 0.5 * (A + A.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(A);
        Mat C = es.eigenvectors().leftCols(nb);

        Mat Xn = S * C;
        Mat HXn = HS * C;
        // new P: the part of the update orthogonal to the previous X
        Mat proj = X.transpose() * Xn;
        Mat Pn = Xn - X * proj;
        Mat HPn = HXn - HX * proj;
        for (int c = 0; c < Pn.cols(); ++c) {
            double nn = Pn.col(c).norm();
            if (nn > 1e-10) { Pn.col(c) /= nn; HPn.col(c) /= nn; }
        }
        X = Xn;
        HX = HXn;
        P = Pn;
        HP = HPn;
    }

    // L2-normalize, orient, and package the negative-eigenvalue states
    std::vector<BoundState> out;
    for (int c = 0; c < nb && int(out.size()) < max_count; ++c) {
        if (theta(c) >= -neg_threshold) continue;
        RealField m(g);
        Eigen::VectorXd::Map(m.values.data(), n) = X.col(c);
        double nrm = l2_norm(m);
        m *= 1.0 / nrm;
        if (field_mean(m) < 0) m *= -1.0;
        RealField hm = H.apply(m);
        double E = inner(hm, m);
        for (std::size_t q = 0; q < hm.values.size(); ++q)
            hm.values[q] -= E * m.values[q];
        BoundState b{std::move(m), E, std::sqrt(-E), l2_norm(hm), 0.0};
        out.push_back(std::move(b));
    }
    std::sort(out.begin(), out.end(),
              [](const BoundState& a, const BoundState& b) {
                  return a.eigenvalue < b.eigenvalue;
              });
    return out;
}

inline RealField project_pb(const RealField& u, const std::vector<BoundState>& states) {
    RealField out(u.grid);
    for (const auto& s : states) {
        double c = inner(u, s.m);
        for (std::size_t n = 0; n < out.values.size(); ++n)
            out.values[n] += c * s.m.values[n];
    }
    return out;
}

inline RealField project_pc(const RealField& u, const std::vector<BoundState>& states) {
    RealField out = u;
    for (const auto& s : states) {
        double c = inner(u, s.m);
        for (std::size_t n = 0; n < out.values.size(); ++n)
            out.values[n] -= c * s.m.values[n];
    }
    return out;
}

struct AgmonReport {
    double fitted_rate = 0.0;       // exterior slope of -log(|m| r)
    double theoretical_cap = 0.0;   // 2 sqrt(-E)
    double weighted_ratio = 0.0;    // int e^{alpha|x|} m^2 / int m^2 at alpha = 0.9 cap
    double alpha_used = 0.0;
    bool pointwise_ok = false;      // |m| below C e^{-rate r}/r on the shell
};

/// Exterior-decay diagnostics of a bound state: least-squares slope of
/// log(|m(x)| |x|) over a radial shell outside the well, plus the weighted
/// L2 comparability check.
inline AgmonReport agmon_report(const BoundState& state, double r_lo, double r_hi,
                                double alpha_fraction = 0.9) {
    const Grid3& g = state.m.grid;
    if (!(r_hi > r_lo + 4.0 * g.spacing()))
        throw ConfigError("agmon_report: exterior shell too thin");
    if (r_hi > 0.5 * g.side_length())
        throw ConfigError("agmon_report: shell exceeds the inscribed ball");
    // radial bins, median of log(|m| r) per bin
    int nbins = std::max(6, int((r_hi - r_lo) / g.spacing() / 2));
    std::vector<std::vector<double>> bins(nbins);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k) {
                double r = norm(g.point(i, j, k));
                if (r < r_lo || r >= r_hi) continue;
                double v = std::abs(state.m.at(i, j, k)) * r;
                if (v <= 0) continue;
                int b = int((r - r_lo) / (r_hi - r_lo) * nbins);
                bins[std::min(b, nbins - 1)].push_back(std::log(v));
            }
    std::vector<double> xs, ys;
    for (int b = 0; b < nbins; ++b) {
        if (bins[b].empty()) continue;
        std::nth_element(bins[b].begin(), bins[b].begin() + bins[b].size() / 2,
                         bins[b].end());
        xs.push_back(r_lo + (b + 0.5) * (r_hi - r_lo) / nbins);
        ys.push_back(bins[b][bins[b].size() / 2]);
    }
    if (xs.size() < 3) throw ConfigError("agmon_report: not enough exterior samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= xs.size(); my /= ys.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    AgmonReport rep;
    rep.fitted_rate = -sxy / sxx;
    rep.theoretical_cap = 2.0 * state.lambda;
    rep.alpha_used = alpha_fraction * rep.theoretical_cap;
    double wsum = 0, usum = 0;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k) {
                double r = norm(g.point(i, j, k));
                double m2 = state.m.at(i, j, k) * state.m.at(i, j, k);
                usum += m2;
                wsum += std::exp(rep.alpha_used * r) * m2;
            }
    rep.weighted_ratio = wsum / usum;
    // pointwise bound against the fitted exterior profile, 3x headroom
    double c_fit = std::exp(my + rep.fitted_rate * mx);
    rep.pointwise_ok = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double bound = 3.0 * c_fit * std::exp(-rep.fitted_rate * xs[i]);
        if (std::exp(ys[i]) > bound) rep.pointwise_ok = false;
    }
    return rep;
}

/// Weighted norm int e^{alpha |x|} m^2 dx on the truncated box.
inline double exp_weighted_l2sq(const RealField& m, double alpha) {
    const Grid3& g = m.grid;
    double acc = 0;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k) {
                double r = norm(g.point(i, j, k));
                acc += std::exp(alpha * r) * m.at(i, j, k) * m.at(i, j, k);
            }
    return acc * g.cell_volume();
}

struct DepthSweepRow {
    double depth;
    std::vector<double> s_wave_energies;  // ascending, from the radial oracle
    double threshold_margin;              // |E| of the shallowest state
    bool near_threshold;                  // a state is about to appear/vanish
};

/// Scans well depths with the radial oracle and flags depths where a new
/// bound state is about to emerge (generic-depth selection aid).
inline std::vector<DepthSweepRow> depth_sweep(double a, double smoothing,
                                              const std::vector<double>& depths,
                                              double margin = 0.05) {
    std::vector<DepthSweepRow> rows;
    for (double v0 : depths) {
        PotentialModel m = smoothing > 0
                               ? PotentialModel::smoothed_well(v0, a, smoothing)
                               : PotentialModel::spherical_well(v0, a);
        auto Es = radial::bound_state_energies(
            [&](double r) { return m.radial_value(r); }, 0, v0 + 1.0);
        DepthSweepRow row{v0, Es, 0.0, false};
        if (!Es.empty()) {
            row.threshold_margin = -Es.back();
            row.near_threshold = -Es.back() < margin;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace wavelab
