#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wavelab/ensemble.hpp"
#include "wavelab/hamiltonian.hpp"
#include "wavelab/radial_oracle.hpp"

using namespace wavelab;

namespace {

// the canonical desk-scale well, solved once
struct WellFixture {
    Grid3 grid{16.0, 64};
    PotentialModel model = PotentialModel::smoothed_well(6.0, 1.0, 0.5);
    HamiltonianHandle H{grid, model};
    std::vector<BoundState> states = bound_states(H, 1);
};

const WellFixture& well() {
    static WellFixture w;
    return w;
}

}  // namespace

TEST_CASE("hamiltonian symmetry") {
    Grid3 g(12.0, 32);
    HamiltonianHandle H(g, PotentialModel::smoothed_well(3.0, 1.0, 0.4));
    CauchyData a = random_bump_data(g, 3, 6, 2.5);
    CauchyData b = random_bump_data(g, 4, 6, 2.5);
    double lhs = inner(H.apply(a.g), b.g);
    double rhs = inner(a.g, H.apply(b.g));
    CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-10);
}

TEST_CASE("free hamiltonian has no bound states") {
    Grid3 g(12.0, 32);
    HamiltonianHandle H(g, PotentialModel::spherical_well(0.0, 1.0));
    auto states = bound_states(H, 2, 1e-7, 400);
    CHECK(states.empty());
}

TEST_CASE("radial oracle internal consistency") {
    SECTION("sharp well: shooting matches the transcendental root") {
        double v0 = 4.0, a = 1.0;
        double e_root = radial::sharp_well_ground_energy(v0, a);
        REQUIRE(std::isfinite(e_root));
        auto m = PotentialModel::spherical_well(v0, a);
        // radial grid aligned so r = a is a node: jump handled cleanly
        double e_shoot = radial::bound_state_energy(
            [&](double r) { return m.radial_value(r); }, 0, v0, 8.0, 1.0 / 4096.0);
        CHECK(std::abs(e_shoot - e_root) < 1e-8);
    }

    SECTION("unbound shallow well returns NaN") {
        auto m = PotentialModel::spherical_well(0.5, 1.0);  // sqrt(V0) a < pi/2
        double e = radial::bound_state_energy(
            [&](double r) { return m.radial_value(r); }, 0, 1.0);
        CHECK_FALSE(std::isfinite(e));
    }
}

TEST_CASE("grid eigenvalue against the radial shooting oracle") {
    const auto& w = well();
    REQUIRE(w.states.size() == 1);
    const BoundState& s = w.states[0];
    CHECK(s.eigenvalue < 0.0);
    CHECK(s.residual < 1e-8);
    CHECK(l2_norm(s.m) == Catch::Approx(1.0).epsilon(1e-10));
    double e_oracle = radial::bound_state_energy(
        [&](double r) { return w.model.radial_value(r); }, 0, 5.0);
    INFO("grid E = " << s.eigenvalue << ", oracle E = " << e_oracle);
    CHECK(std::abs(s.eigenvalue - e_oracle) < 1e-4);
}

TEST_CASE("inverse-constructed potential recovers the designed eigenvalue") {
    Grid3 g(16.0, 64);
    auto model = PotentialModel::inverse_constructed(1.0);
    HamiltonianHandle H(g, model);
    auto states = bound_states(H, 1);
    REQUIRE(states.size() == 1);
    INFO("recovered E = " << states[0].eigenvalue);
    CHECK(std::abs(states[0].eigenvalue - model.constructed_eigenvalue()) < 1e-6);
    // eigenfunction matches the designed profile up to normalization
    RealField phi(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k)
                phi.at(i, j, k) = model.oracle_profile(norm(g.point(i, j, k)));
    phi *= 1.0 / l2_norm(phi);
    double overlap = std::abs(inner(states[0].m, phi));
    CHECK(overlap > 1.0 - 1e-6);
}

TEST_CASE("projections") {
    const auto& w = well();
    const auto& states = w.states;
    Grid3 g = w.grid;
    CauchyData d = random_bump_data(g, 21, 6, 3.0);

    SECTION("projector algebra") {
        RealField pb = project_pb(d.g, states);
        RealField pc = project_pc(d.g, states);
        // completeness: pb + pc == u exactly by construction
        double err = 0;
        for (std::size_t n = 0; n < pb.values.size(); ++n)
            err = std::max(err, std::abs(pb.values[n] + pc.values[n] - d.g.values[n]));
        CHECK(err < 1e-14);
        // idempotence
        RealField pbpb = project_pb(pb, states);
        double ierr = 0;
        for (std::size_t n = 0; n < pb.values.size(); ++n)
            ierr = std::max(ierr, std::abs(pbpb.values[n] - pb.values[n]));
        CHECK(ierr / lp_norm(pb, INFINITY) < 1e-10);
        // orthogonality of the complement
        for (const auto& s : states)
            CHECK(std::abs(inner(pc, s.m)) < 1e-10);
        // Pythagoras
        double n2 = inner(d.g, d.g);
        CHECK(inner(pb, pb) + inner(pc, pc) == Catch::Approx(n2).epsilon(1e-10));
    }

    SECTION("projector on an eigenvector") {
        RealField pb = project_pb(states[0].m, states);
        RealField pc = project_pc(states[0].m, states);
        double err = 0;
        for (std::size_t n = 0; n < pb.values.size(); ++n)
            err = std::max(err, std::abs(pb.values[n] - states[0].m.values[n]));
        CHECK(err < 1e-10);
        CHECK(l2_norm(pc) < 1e-10);
    }

    SECTION("empty state list makes P_c the identity") {
        std::vector<BoundState> none;
        RealField pc = project_pc(d.g, none);
        double err = 0;
        for (std::size_t n = 0; n < pc.values.size(); ++n)
            err = std::max(err, std::abs(pc.values[n] - d.g.values[n]));
        CHECK(err == 0.0);
    }
}

TEST_CASE("agmon decay of the bound state") {
    const auto& w = well();
    const BoundState& s = w.states[0];
    AgmonReport rep = agmon_report(s, 3.0, 6.5);

    SECTION("fitted exterior rate within 3% of lambda") {
        INFO("fitted " << rep.fitted_rate << " vs lambda " << s.lambda);
        CHECK(rep.fitted_rate == Catch::Approx(s.lambda).epsilon(0.03));
        CHECK(rep.fitted_rate < rep.theoretical_cap);
        CHECK(rep.pointwise_ok);
    }

    SECTION("weighted norm comparable below the cap") {
        CHECK(rep.weighted_ratio < 100.0);
        CHECK(rep.weighted_ratio > 1.0);
        // alpha = 0: weights are exactly 1
        double u2 = inner(s.m, s.m);
        CHECK(exp_weighted_l2sq(s.m, 0.0) == Catch::Approx(u2).epsilon(1e-12));
    }

    SECTION("above the cap the truncated norm grows with the box") {
        // same spacing, doubled box: a heavier exterior shell
        Grid3 small(8.0, 32);
        HamiltonianHandle Hs(small, w.model);
        auto ss = bound_states(Hs, 1);
        REQUIRE(ss.size() == 1);
        double alpha = 1.1 * 2.0 * s.lambda;
        double small_ratio = exp_weighted_l2sq(ss[0].m, alpha) / inner(ss[0].m, ss[0].m);
        double big_ratio = exp_weighted_l2sq(s.m, alpha) / inner(s.m, s.m);
        INFO("small box " << small_ratio << " -> big box " << big_ratio);
        CHECK(big_ratio > 1.5 * small_ratio);  // divergent trend flag
    }

    SECTION("too-thin exterior shell is a configuration error") {
        CHECK_THROWS_AS(agmon_report(s, 3.0, 3.2), ConfigError);
    }
}

TEST_CASE("depth sweep flags near-threshold wells") {
    auto rows = depth_sweep(1.0, 0.5, {0.5, 1.0, 2.0, 4.0, 8.0});
    REQUIRE(rows.size() == 5);
    // deeper wells bind more; the count is nondecreasing in depth
    std::size_t prev = 0;
    for (const auto& r : rows) {
        CHECK(r.s_wave_energies.size() >= prev);
        prev = r.s_wave_energies.size();
    }
    CHECK(rows[4].s_wave_energies.size() >= 1);
}
