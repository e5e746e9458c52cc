#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wavelab/potential.hpp"

using namespace wavelab;

TEST_CASE("potential shapes") {
    SECTION("spherical well values") {
        auto m = PotentialModel::spherical_well(4.0, 1.0);
        CHECK(m.value({0.5, 0, 0}) == -4.0);
        CHECK(m.value({0, 0.99, 0}) == -4.0);
        CHECK(m.value({1.2, 0, 0}) == 0.0);
        CHECK(m.sup_norm() == 4.0);
        CHECK(std::isinf(m.grad_l1()));
    }

    SECTION("smoothed well tail is dominated by any power weight") {
        auto m = PotentialModel::smoothed_well(4.0, 1.0, 0.4);
        double cap = 0.0;
        for (double r = 0.0; r < 40.0; r += 0.1) {
            double w = std::pow(1.0 + r * r, 2.0);  // <r>^4
            cap = std::max(cap, std::abs(m.radial_value(r)) * w);
        }
        CHECK(cap < 1e4);                        // bounded, alpha = 4 works
        CHECK(m.decay_alpha() > 3.0);            // hypothesis ledger gate
        CHECK(std::isfinite(m.grad_l1()));
        CHECK(m.grad_l1() > 0.0);
        // |V| <= sup everywhere
        for (double r = 0.0; r < 10.0; r += 0.05)
            CHECK(std::abs(m.radial_value(r)) <= m.sup_norm() + 1e-12);
    }

    SECTION("inverse construction satisfies its eigen equation in 1d") {
        auto m = PotentialModel::inverse_constructed(0.9);
        double E = m.constructed_eigenvalue();
        // finite-difference check of -phi'' - (2/r) phi' + V phi = E phi
        double h = 1e-4;
        for (double r : {0.7, 1.9, 3.3}) {
            auto phi = [&](double x) { return m.oracle_profile(x); };
            double lap = (phi(r + h) - 2 * phi(r) + phi(r - h)) / (h * h) +
                         (phi(r + h) - phi(r - h)) / (h * r);
            double resid = -lap + m.radial_value(r) * phi(r) - E * phi(r);
            CHECK(std::abs(resid) < 1e-6);
        }
    }
}

TEST_CASE("moving potential evaluation") {
    auto m = PotentialModel::smoothed_well(3.0, 1.0, 0.3);
    Trajectory tr = Trajectory::powerlaw_decay({0.4, 0, 0}, 0.2, 2.0);

    SECTION("comoving shift is exact") {
        for (double t : {-2.0, 0.0, 1.3, 4.0})
            for (Vec3 x : {Vec3{0, 0, 0}, Vec3{0.7, -0.3, 1.1}}) {
                Vec3 moved = x + tr(t);
                CHECK(eval_moving_potential(m, tr, moved, t) == m.value(x));
            }
    }

    SECTION("linear trajectory comoving point sees the well bottom") {
        Trajectory lin = Trajectory::linear({0.5, 0, 0});
        for (double t : {0.0, 2.0, 5.0}) {
            Vec3 x = lin(t);
            CHECK(eval_moving_potential(m, lin, x, t) == m.value({0, 0, 0}));
        }
    }
}

TEST_CASE("admissibility checking") {
    SECTION("linear trajectory: exact speed, linearity flag") {
        Trajectory tr = Trajectory::linear({0.5, 0, 0});
        auto res = admissibility_check(tr, -5.0, 5.0);
        CHECK(res.ok);
        CHECK(res.measured_speed == Catch::Approx(0.5).epsilon(1e-12));
        CHECK(res.exactly_linear);
    }

    SECTION("powerlaw deviation: beta fit within 5%") {
        Trajectory tr = Trajectory::powerlaw_decay({0.3, 0, 0}, 0.5, 2.0);
        auto res = admissibility_check(tr, 1.0, 40.0, 4000);
        CHECK(res.ok);
        CHECK_FALSE(res.exactly_linear);
        CHECK(res.beta_fit == Catch::Approx(2.0).epsilon(0.05));
    }

    SECTION("light-speed trajectory is rejected") {
        Trajectory tr = Trajectory::linear({1.0, 0, 0});
        auto res = admissibility_check(tr, -1.0, 1.0);
        CHECK_FALSE(res.ok);
    }
}

TEST_CASE("lorentz contraction of the potential") {
    auto well = PotentialModel::spherical_well(4.0, 1.0);

    SECTION("mu = 0 is the identity") {
        auto c = well.lorentz_contracted(0.0);
        for (double r : {0.3, 0.9, 1.4})
            CHECK(c.value({r, 0, 0}) == well.value({r, 0, 0}));
    }

    SECTION("support becomes an ellipsoid stretched along x1") {
        double mu = 0.6;
        auto c = well.lorentz_contracted(mu);
        double semi = 1.0 / std::sqrt(1.0 - mu * mu);  // a / sqrt(1 - mu^2)
        CHECK(c.value({0.99 * semi, 0, 0}) == -4.0);
        CHECK(c.value({1.01 * semi, 0, 0}) == 0.0);
        CHECK(c.value({0, 0.99, 0}) == -4.0);  // transverse axes unchanged
        CHECK(c.value({0, 1.01, 0}) == 0.0);
        CHECK(c.sup_norm() == well.sup_norm());
    }

    SECTION("contraction composes multiplicatively") {
        double mu = 0.5;
        auto twice = well.lorentz_contracted(mu).lorentz_contracted(-mu);
        double s = std::sqrt(1.0 - mu * mu);
        for (Vec3 x : {Vec3{1.1, 0.2, 0}, Vec3{0.4, 0, 0.8}}) {
            Vec3 scaled{s * s * x[0], x[1], x[2]};
            CHECK(twice.value(x) == Catch::Approx(well.value(scaled)).margin(1e-15));
        }
    }

    SECTION("|mu| >= 1 is a domain error") {
        CHECK_THROWS_AS(well.lorentz_contracted(1.0), DomainError);
    }
}
