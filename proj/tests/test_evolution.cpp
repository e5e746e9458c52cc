#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wavelab/ensemble.hpp"
#include "wavelab/evolution.hpp"
#include "wavelab/hamiltonian.hpp"

using namespace wavelab;

namespace {

struct EvoFixture {
    Grid3 grid{12.0, 32};
    PotentialModel model = PotentialModel::smoothed_well(6.0, 1.0, 0.5);
    HamiltonianHandle H{grid, model};
    std::vector<BoundState> states = bound_states(H, 1, 1e-9, 600);
};

const EvoFixture& fx() {
    static EvoFixture f;
    return f;
}

double max_abs_diff(const RealField& a, const RealField& b) {
    double m = 0;
    for (std::size_t n = 0; n < a.values.size(); ++n)
        m = std::max(m, std::abs(a.values[n] - b.values[n]));
    return m;
}

}  // namespace

TEST_CASE("splitting degenerates to the free propagator when V = 0") {
    Grid3 g(12.0, 32);
    CauchyData d = random_bump_data(g, 9, 5, 2.0);
    auto zero = PotentialModel::spherical_well(0.0, 1.0);
    EvolveConfig cfg;
    cfg.dt = 1.0 / 32.0;
    cfg.snapshot_stride = 8;
    SpaceTimeField h = evolve(d, zero, Trajectory::linear({0, 0, 0}), 2.0, cfg);
    CauchyData ref = propagate_free(d, 2.0);
    CHECK(max_abs_diff(h.u(h.count() - 1), ref.g) < 1e-12);
    CHECK(max_abs_diff(h.ut(h.count() - 1), ref.f) < 1e-12);
}

TEST_CASE("bound-state data grows like cosh(lambda t)") {
    const auto& f = fx();
    REQUIRE(f.states.size() == 1);
    const BoundState& s = f.states[0];
    CauchyData d(s.m, RealField(f.grid));
    EvolveConfig cfg;
    cfg.dt = 1.0 / 128.0;
    cfg.snapshot_stride = 16;
    SpaceTimeField h = evolve(d, f.model, Trajectory::linear({0, 0, 0}), 1.5, cfg);
    for (std::size_t i = 0; i < h.count(); ++i) {
        double a = inner(h.u(i), s.m);
        double expect = std::cosh(s.lambda * h.time(i));
        CHECK(a == Catch::Approx(expect).epsilon(1e-3));
        // the field stays in the span of m up to scheme error
        RealField resid = h.u(i);
        for (std::size_t n = 0; n < resid.values.size(); ++n)
            resid.values[n] -= a * s.m.values[n];
        CHECK(l2_norm(resid) < 2e-2 * std::abs(a));  // O(dt^2) splitting leakage
    }
}

TEST_CASE("second-order convergence for a moving well") {
    Grid3 g(12.0, 32);
    CauchyData d = random_bump_data(g, 17, 5, 2.0);
    auto model = PotentialModel::smoothed_well(4.0, 1.0, 0.5);
    Trajectory traj = Trajectory::linear({0.4, 0, 0});
    auto run = [&](double dt) {
        EvolveConfig cfg;
        cfg.dt = dt;
        cfg.snapshot_stride = std::lround(1.0 / dt) / 2;  // snapshots at 0, T/2, T
        return evolve(d, model, traj, 1.0, cfg);
    };
    SpaceTimeField h1 = run(1.0 / 32.0), h2 = run(1.0 / 64.0), h3 = run(1.0 / 128.0);
    double e12 = max_abs_diff(h1.u(2), h2.u(2));
    double e23 = max_abs_diff(h2.u(2), h3.u(2));
    INFO("e12 = " << e12 << ", e23 = " << e23);
    CHECK(e12 / e23 == Catch::Approx(4.0).epsilon(0.25));  // Richardson ratio
}

TEST_CASE("energy behaviour under the split scheme") {
    const auto& f = fx();
    CauchyData d = random_bump_data(f.grid, 23, 5, 2.0);

    SECTION("V = 0: constant total energy") {
        auto zero = PotentialModel::spherical_well(0.0, 1.0);
        EvolveConfig cfg;
        cfg.dt = 1.0 / 64.0;
        SpaceTimeField h = evolve(d, zero, Trajectory::linear({0, 0, 0}), 2.0, cfg);
        auto series = total_energy_series(h, zero, Trajectory::linear({0, 0, 0}));
        for (auto& p : series)
            CHECK(std::abs(p.total - series[0].total) / series[0].total < 1e-10);
    }

    SECTION("stationary V: drift below 5 dt^2") {
        EvolveConfig cfg;
        cfg.dt = 1.0 / 64.0;
        SpaceTimeField h = evolve(d, f.model, Trajectory::linear({0, 0, 0}), 2.0, cfg);
        auto series = total_energy_series(h, f.model, Trajectory::linear({0, 0, 0}));
        double drift = 0;
        for (auto& p : series)
            drift = std::max(drift, std::abs(p.total - series[0].total) /
                                        std::abs(series[0].total));
        CHECK(drift < 5.0 * cfg.dt * cfg.dt);
    }
}

TEST_CASE("configuration errors") {
    Grid3 g(12.0, 32);
    CauchyData d = random_bump_data(g, 3, 5, 2.0);
    auto model = PotentialModel::smoothed_well(4.0, 1.0, 0.5);
    EvolveConfig cfg;
    cfg.dt = 1.0 / 32.0;
    SECTION("T not a multiple of dt") {
        CHECK_THROWS_AS(evolve(d, model, Trajectory::linear({0, 0, 0}), 1.017, cfg),
                        ConfigError);
    }
    SECTION("inadmissible trajectory") {
        CHECK_THROWS_AS(evolve(d, model, Trajectory::linear({1.2, 0, 0}), 1.0, cfg),
                        ConfigError);
    }
    SECTION("budget violation") {
        CHECK_THROWS_AS(evolve(d, model, Trajectory::linear({0, 0, 0}), 8.0, cfg),
                        ConfigError);
    }
}

TEST_CASE("picard oracle") {
    Grid3 g(12.0, 32);
    CauchyData d = random_bump_data(g, 29, 5, 2.0);

    SECTION("V = 0 converges immediately to the free solution") {
        auto zero = PotentialModel::spherical_well(0.0, 1.0);
        PicardReport rep = picard_solve(d, zero, Trajectory::linear({0, 0, 0}), 1.0, 8);
        CHECK(rep.total_iterations <= 2);
        CauchyData ref = propagate_free(d, 1.0);
        CHECK(max_abs_diff(rep.history.u(rep.history.count() - 1), ref.g) < 1e-9);
    }

    SECTION("contraction ratio below 1/2 when the window satisfies T||V|| < 1/10") {
        const auto& f = fx();
        PicardReport rep = picard_solve(d, f.model, Trajectory::linear({0, 0, 0}), 0.5);
        CHECK(rep.window_length * f.model.sup_norm() < 0.1);
        CHECK(rep.max_contraction_ratio <= 0.5);
    }

    SECTION("cross-scheme agreement with the splitting integrator") {
        const auto& f = fx();
        PicardReport rep = picard_solve(d, f.model, Trajectory::linear({0, 0, 0}), 1.0);
        EvolveConfig cfg;
        cfg.dt = 1.0 / 1024.0;
        cfg.snapshot_stride = 1024;
        SpaceTimeField h = evolve(d, f.model, Trajectory::linear({0, 0, 0}), 1.0, cfg);
        double diff = max_abs_diff(rep.history.u(rep.history.count() - 1),
                                   h.u(h.count() - 1));
        INFO("sup difference " << diff);
        CHECK(diff < 1e-5);
    }
}

TEST_CASE("comoving shift") {
    Grid3 g(12.0, 32);
    CauchyData d = random_bump_data(g, 37, 5, 2.0);
    auto zero = PotentialModel::spherical_well(0.0, 1.0);
    EvolveConfig cfg;
    cfg.dt = 1.0 / 32.0;
    cfg.snapshot_stride = 16;
    SpaceTimeField h = evolve(d, zero, Trajectory::linear({0, 0, 0}), 1.0, cfg);

    SECTION("zero trajectory is the identity") {
        SpaceTimeField s = shift_to_comoving(h, Trajectory::linear({0, 0, 0}));
        CHECK(max_abs_diff(s.u(2), h.u(2)) < 1e-13);
    }

    SECTION("shifting by v then by -v returns the original") {
        // exact invertibility is a band-limited-subspace property
        SpaceTimeField hb(g, h.t0(), h.dt());
        for (std::size_t i = 0; i < h.count(); ++i)
            hb.push(band_limit(h.u(i), 10), band_limit(h.ut(i), 10));
        SpaceTimeField s1 = shift_to_comoving(hb, Trajectory::linear({0.5, 0.2, 0}));
        SpaceTimeField s2 = shift_to_comoving(s1, Trajectory::linear({-0.5, -0.2, 0}));
        CHECK(max_abs_diff(s2.u(2), hb.u(2)) < 1e-10);
    }

    SECTION("lattice-aligned shifts reduce to exact index rotations") {
        // snapshot times 0.5 apart with mu = 0.75: v(t_i) = 0.375 i = h i
        Trajectory traj = Trajectory::linear({0.75, 0, 0});
        SpaceTimeField com = shift_to_comoving(h, traj);
        const Grid3& gg = h.grid();
        for (std::size_t i = 0; i < com.count(); ++i) {
            long cells = std::lround(traj(com.time(i))[0] / gg.spacing());
            double err = 0;
            for (int a = 0; a < gg.n(); ++a)
                for (int b = 0; b < gg.n(); ++b)
                    for (int c = 0; c < gg.n(); ++c)
                        err = std::max(err, std::abs(
                            com.u(i).at(a, b, c) -
                            h.u(i).at((a + cells) % gg.n(), b, c)));
            CHECK(err < 1e-11);
        }
    }
}
