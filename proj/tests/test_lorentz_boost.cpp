#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wavelab/ensemble.hpp"
#include "wavelab/evolution.hpp"
#include "wavelab/lorentz.hpp"

using namespace wavelab;

namespace {

SpaceTimeField free_history(const CauchyData& d, double t0, double dt, int count) {
    SpaceTimeField h(d.grid(), t0, dt);
    for (int i = 0; i < count; ++i) {
        CauchyData s = propagate_free(d, t0 + i * dt);
        h.push(std::move(s.g), std::move(s.f));
    }
    return h;
}

}  // namespace

TEST_CASE("boost coordinates") {
    SECTION("gamma relation holds to machine precision") {
        for (double mu : {0.1, 0.5, 0.9, 0.99}) {
            BoostParams b(mu);
            CHECK(std::abs(b.gamma * b.gamma * (1.0 - mu * mu) - 1.0) < 1e-14);
        }
    }

    SECTION("mu = 0 is the identity") {
        BoostParams b(0.0);
        Event e = boost_coords(b, {1.2, -0.3, 0.7}, 2.5);
        CHECK(e.x[0] == 1.2);
        CHECK(e.t == 2.5);
    }

    SECTION("origin is a fixed point") {
        for (double mu : {0.2, 0.7, -0.5}) {
            Event e = boost_coords(BoostParams(mu), {0, 0, 0}, 0.0);
            CHECK(e.x[0] == 0.0);
            CHECK(e.t == 0.0);
        }
    }

    SECTION("light-cone point keeps a null interval under mu = 0.8") {
        BoostParams b(0.8);
        Event e = boost_coords(b, {1, 0, 0}, 1.0);
        CHECK(std::abs(minkowski_interval(e.x, e.t)) < 1e-12);
    }

    SECTION("interval invariance and inverse composition") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> U(-2, 2), M(-0.9, 0.9);
        for (int q = 0; q < 50; ++q) {
            BoostParams b(M(rng));
            Vec3 x{U(rng), U(rng), U(rng)};
            double t = U(rng);
            Event e = boost_coords(b, x, t);
            CHECK(std::abs(minkowski_interval(e.x, e.t) - minkowski_interval(x, t)) <
                  1e-12);
            Event back = inverse_boost_coords(b, e.x, e.t);
            CHECK(std::abs(back.x[0] - x[0]) < 1e-12);
            CHECK(std::abs(back.t - t) < 1e-12);
        }
    }

    SECTION("|mu| >= 1 is rejected") {
        CHECK_THROWS_AS(BoostParams(1.0), DomainError);
    }
}

TEST_CASE("boost of field histories") {
    Grid3 g(12.0, 32);

    SECTION("mu = 0 reproduces the stored snapshots") {
        CauchyData d = random_bump_data(g, 11, 5, 2.0);
        SpaceTimeField h = free_history(d, 0.0, 0.25, 9);
        SpaceTimeField bl = boost_field(h, BoostParams(0.0), 0.25, 0.25, 3);
        for (int s = 0; s < 3; ++s) {
            const RealField& ref = h.u(s + 1);
            double err = 0;
            for (std::size_t n = 0; n < ref.values.size(); ++n)
                err = std::max(err, std::abs(bl.u(s).values[n] - ref.values[n]));
            CHECK(err < 1e-10);
        }
    }

    SECTION("boosted plane wave matches the boosted dispersion relation") {
        double L = g.side_length();
        double xi = 2.0 * M_PI / L, om = xi;  // right-moving light-cone mode
        RealField gg(g), ff(g);
        for (int i = 0; i < g.n(); ++i)
            for (int j = 0; j < g.n(); ++j)
                for (int k = 0; k < g.n(); ++k) {
                    gg.at(i, j, k) = std::sin(xi * g.coord(i));
                    ff.at(i, j, k) = -om * std::cos(xi * g.coord(i));
                }
        CauchyData d(gg, ff);
        SpaceTimeField h = free_history(d, 0.0, 0.125, 33);  // t in [0, 4]
        double mu = 0.3;
        BoostParams b(mu);
        auto [lo, hi] = boosted_window(h, b, 0.5 * L);
        REQUIRE(lo < hi);
        SpaceTimeField bl = boost_field(h, b, lo, 0.125, 2);
        double xip = b.gamma * (xi - mu * om), omp = b.gamma * (om - mu * xi);
        double err = 0, err_t = 0;
        for (int s = 0; s < 2; ++s) {
            double tp = lo + 0.125 * s;
            for (int i = 0; i < g.n(); ++i)
                for (int j = 0; j < g.n(); ++j)
                    for (int k = 0; k < g.n(); ++k) {
                        double expect = std::sin(xip * g.coord(i) - omp * tp);
                        double expect_t = -omp * std::cos(xip * g.coord(i) - omp * tp);
                        err = std::max(err, std::abs(bl.u(s).at(i, j, k) - expect));
                        err_t = std::max(err_t,
                                         std::abs(bl.ut(s).at(i, j, k) - expect_t));
                    }
        }
        CHECK(err < 1e-5);
        CHECK(err_t < 1e-5);
    }

    SECTION("round trip: boost then inverse boost") {
        CauchyData raw = random_bump_data(g, 13, 5, 2.0);
        CauchyData d(band_limit(raw.g, 5), band_limit(raw.f, 5));
        d.support_radius = 2.1;  // band limiting only nudges the tails
        SpaceTimeField h = free_history(d, 0.0, 0.05, 71);  // t in [0, 3.5]
        double mu = 0.1;
        BoostParams fwd(mu), bwd(-mu);
        auto [lo, hi] = boosted_window(h, fwd, 0.5 * g.side_length());
        int count = int((hi - lo) / 0.05) + 1;
        SpaceTimeField bl = boost_field(h, fwd, lo, 0.05, count);
        auto [lo2, hi2] = boosted_window(bl, bwd, 0.5 * g.side_length());
        REQUIRE(lo2 < hi2);
        double t_probe = 0.5 * (lo2 + hi2);
        SpaceTimeField back = boost_field(bl, bwd, t_probe, 0.05, 1);
        RealField ref = h.interpolate_u(t_probe);
        double err = 0, scale = lp_norm(ref, INFINITY);
        for (std::size_t n = 0; n < ref.values.size(); ++n)
            err = std::max(err, std::abs(back.u(0).values[n] - ref.values[n]));
        CHECK(err / scale < 1e-6);
    }

    SECTION("preimage outside the slab raises a domain error") {
        CauchyData d = random_bump_data(g, 17, 5, 2.0);
        SpaceTimeField h = free_history(d, 0.0, 0.25, 9);
        CHECK_THROWS_AS(boost_field(h, BoostParams(0.4), 1.9, 0.25, 2), DomainError);
    }
}

TEST_CASE("slanted slice energy") {
    Grid3 g(12.0, 32);
    CauchyData d = random_bump_data(g, 19, 5, 2.0);

    SECTION("v = 0 equals the flat t = 0 energy") {
        // flat reference with the same derivative convention (Nyquist rows
        // carry no derivative) as the slice estimator
        auto gr = gradient(d.g);
        double flat = l2_norm(d.f) * l2_norm(d.f);
        for (int a = 0; a < 3; ++a) flat += l2_norm(gr[a]) * l2_norm(gr[a]);
        CHECK(slanted_energy_free(d, 0.0) == Catch::Approx(flat).epsilon(1e-10));
    }

    SECTION("stored-history and direct free paths agree") {
        // band-limited data: cubic time interpolation of full-band window
        // content would dominate the comparison otherwise
        CauchyData bd(band_limit(d.g, 5), band_limit(d.f, 5));
        bd.support_radius = 2.1;
        SpaceTimeField h = free_history(bd, -3.2, 0.04, 161);  // t in [-3.2, 3.2]
        double v = 0.5;
        double a = slanted_energy(h, v);
        double b = slanted_energy_free(bd, v);
        CHECK(a == Catch::Approx(b).epsilon(1e-6));
    }

    SECTION("time-independent history: slanted equals flat for every v") {
        SpaceTimeField h(g, -4.5, 0.5);
        for (int i = 0; i < 19; ++i) h.push(d.g, RealField(g));
        double flat = slanted_energy(h, 0.0);
        for (double v : {0.3, 0.7})
            CHECK(slanted_energy(h, v) == Catch::Approx(flat).epsilon(1e-12));
    }

    SECTION("slice exiting the slab raises a domain error") {
        SpaceTimeField h = free_history(d, 0.0, 0.25, 9);  // t in [0, 2] only
        CHECK_THROWS_AS(slanted_energy(h, 0.5), DomainError);
    }

    SECTION("comparability over a small ensemble") {
        auto ens = make_ensemble(g, {DataFamily::RandomBump, 3, 77, 5, 2.0, 0.8});
        auto rows = energy_comparability_report(ens, {0.3, 0.6});
        REQUIRE(rows.size() == 6);
        for (const auto& r : rows) {
            CHECK(r.ratio > 1.0 / 5.0);
            CHECK(r.ratio < 5.0);
        }
    }

    SECTION("time reversal leaves the ratio distribution unchanged") {
        // u(x,-t) solves the equation with data (g, -f); its slanted energy
        // at v equals the original at -v
        CauchyData rev(d.g, -1.0 * d.f);
        rev.support_radius = d.support_radius;
        CHECK(slanted_energy_free(rev, 0.4) ==
              Catch::Approx(slanted_energy_free(d, -0.4)).epsilon(1e-10));
    }
}
