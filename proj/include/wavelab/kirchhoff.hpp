#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "wavelab/errors.hpp"
#include "wavelab/field_ops.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/numerics.hpp"

namespace wavelab {

/// Spherical quadrature: Gauss-Legendre in cos(theta) x uniform phi.
/// `level` scales the node counts; two consecutive levels give a Richardson
/// error check. Weights sum to 4*pi.
struct SphereRule {
    std::vector<Vec3> nodes;
    std::vector<double> weights;

    explicit SphereRule(int level = 4) {
        int nt = 4 * level, nphi = 8 * level;
        std::vector<double> mu, wmu;
        gauss_legendre(nt, mu, wmu);
        for (int q = 0; q < nt; ++q) {
            double st = std::sqrt(std::max(0.0, 1.0 - mu[q] * mu[q]));
            for (int p = 0; p < nphi; ++p) {
                double phi = 2.0 * M_PI * p / nphi;
                nodes.push_back({st * std::cos(phi), st * std::sin(phi), mu[q]});
                weights.push_back(wmu[q] * 2.0 * M_PI / nphi);
            }
        }
    }
};

/// Kirchhoff spherical-mean evaluation of the free solution at one point:
///   u(x,t) = t <f>_{S(x,t)} + <g>_{S(x,t)} + t <grad g . omega>_{S(x,t)}
/// with <.> the average over the sphere of radius t. Fields are spectrally
/// upsampled once and probed by periodic Lagrange interpolation.
class KirchhoffEvaluator {
  public:
    KirchhoffEvaluator(const CauchyData& data, int pad_factor = 2, int level = 4)
        : L_(data.grid().side_length()),
          rule_(level),
          f_(upsample(data.f, pad_factor)),
          g_(upsample(data.g, pad_factor)),
          gg_{upsample_grad(data.g, pad_factor)} {}

    double operator()(const Vec3& x, double t) const {
        if (!(t > 0)) throw DomainError("kirchhoff: requires t > 0");
        for (double c : x)
            if (std::abs(c) + t > 0.5 * L_)
                throw DomainError("kirchhoff: sphere leaves the box interior");
        LagrangeInterp fi(f_), gi(g_), g1(gg_[0]), g2(gg_[1]), g3(gg_[2]);
        double mf = 0.0, mg = 0.0, mdg = 0.0;
        for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
            const Vec3& om = rule_.nodes[q];
            Vec3 y{x[0] + t * om[0], x[1] + t * om[1], x[2] + t * om[2]};
            double w = rule_.weights[q];
            mf += w * fi(y);
            mg += w * gi(y);
            mdg += w * (om[0] * g1(y) + om[1] * g2(y) + om[2] * g3(y));
        }
        const double inv4pi = 1.0 / (4.0 * M_PI);
        return t * inv4pi * mf + inv4pi * mg + t * inv4pi * mdg;
    }

  private:
    static std::array<RealField, 3> upsample_grad(const RealField& g, int pad) {
        auto gr = gradient(g);
        return {upsample(gr[0], pad), upsample(gr[1], pad), upsample(gr[2], pad)};
    }
    double L_;
    SphereRule rule_;
    RealField f_, g_;
    std::array<RealField, 3> gg_;
};

}  // namespace wavelab
