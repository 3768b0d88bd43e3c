#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wedge/error.hpp"
#include "wedge/selfsimilar.hpp"

using namespace wedge;

namespace {
const SectorGeometry kGeo(oracle::pi / 4, 0.5);
LawPair constant_pair(double g) { return {BoundaryLaw::constant(1, g), BoundaryLaw::constant(2, g)}; }

OrbitSearch search() { return OrbitSearch::from(RunConfig::defaults()); }

// rho cos(theta) = sqrt(2) f(rho sin(theta) / sqrt(2)): the chart-time
// independent image of the classical solution (v = log rho, w = -log rho)
std::vector<double> log_image(const Profile& p, const std::vector<double>& theta) {
    std::vector<double> out;
    for (double th : theta) {
        const double R = oracle::bisect(
            [&](double R) { return R * std::cos(th) - std::sqrt(2.0) * p.value_at(R * std::sin(th) / std::sqrt(2.0)); },
            1e-3, 10.0);
        out.push_back(std::log(R));
    }
    return out;
}
}  // namespace

TEST_SUITE("selfsimilar") {
    TEST_CASE("constant expanding laws give the classical image") {
        const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(0.2)};
        const auto cd = build_convex_datum(kGeo, pb.laws, pb.a, 0.05);
        const auto orbit = find_expanding_orbit(pb, cd.datum, search());
        REQUIRE(orbit.converged);
        const auto vstar = log_image(solve_phi(pb.a, 0.2, 0.2, kGeo), orbit.theta);
        double worst = 0;
        for (double frac : {0.0, 0.4, 0.8}) {
            const auto f = orbit.field(orbit.s_nodes[orbit.nodes_per_period] + frac * orbit.period());
            for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(f[i] - vstar[i]));
        }
        CHECK(worst < 1e-3);
        CHECK(orbit.oscillation < 1e-3);
    }

    TEST_CASE("exact classical orbit has a vanishing residual") {
        SelfsimilarOrbit orbit;
        orbit.kind = ProfileKind::expanding;
        orbit.b = 2.0;
        orbit.chart = ChartId::v();
        orbit.theta = theta_grid(kGeo, 101);
        orbit.nodes_per_period = 16;
        const auto vstar = log_image(solve_phi(Diffusivity::constant(1.0), 0.2, 0.2, kGeo), orbit.theta);
        for (int k = 0; k <= 32; ++k) {
            orbit.s_nodes.push_back(std::log(2.0) * k / 16);
            orbit.window.push_back(vstar);
        }
        orbit.converged = true;
        const auto rep = similarity_residual(orbit);
        CHECK(rep.residual < 1e-10);
        CHECK(rep.endpoint_defect < 1e-10);
    }

    TEST_CASE("sinusoidal expanding law gives a genuinely discrete orbit") {
        PeriodicShape shape;
        shape.mean = 0.2;
        shape.modes = {{0.05, 1, 0, 0.0}};
        const LawPair laws{make_discrete_similar_law(shape, 2.0, 1, LawKind::expanding, kGeo),
                           make_discrete_similar_law(shape, 2.0, 2, LawKind::expanding, kGeo)};
        const Problem pb{kGeo, Diffusivity::constant(1.0), laws};
        const auto cd = build_convex_datum(kGeo, laws, pb.a, 0.05, 2001, 1.0);
        const auto orbit = find_expanding_orbit(pb, cd.datum, search());
        REQUIRE(orbit.converged);
        CHECK(orbit.periodicity_defect < 1e-3);
        CHECK(orbit.oscillation > 1e-3);
        const auto rep = similarity_residual(orbit);
        CHECK(rep.residual < 1e-2);
        // Xi2(b^2 t) = b Xi2(t) across a decade of t
        const double s0 = orbit.s_nodes[orbit.nodes_per_period];
        double worst = 0;
        for (int j = 0; j <= 10; ++j) {
            const double s = s0 + 0.5 * std::log(10.0) * j / 10;
            const double a = orbit.recover(s).xi2, b = orbit.recover(s + std::log(2.0)).xi2;
            worst = std::max(worst, std::abs(b / a - 2.0) / 2.0);
        }
        CHECK(worst < 1e-3);
    }

    TEST_CASE("constant shrinking laws give the psi image") {
        const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(-0.2)};
        const auto dome = tangent_bezier_datum(kGeo, pb.laws, 1.0, 1.0);
        const auto orbit = find_shrinking_orbit(pb, dome, 1.0, search());
        REQUIRE(orbit.converged);
        const auto rho = log_image(solve_psi(pb.a, -0.2, -0.2, kGeo), orbit.theta);
        double worst = 0;
        const auto f = orbit.field(orbit.s_nodes[orbit.nodes_per_period]);
        for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(f[i] + rho[i]));
        CHECK(worst < 1e-3);
        CHECK(similarity_residual(orbit).residual < 1e-2);
    }

    TEST_CASE("extinction targeting") {
        const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(-0.2)};
        const auto q = solve_psi(pb.a, -0.2, -0.2, kGeo);
        const auto s = search();
        const auto exact = target_extinction(1.0, pb, classical_datum(q, 1.0), s);
        CHECK(exact.bisections <= 1);
        CHECK(exact.extinction_time == doctest::Approx(1.0).epsilon(0.01));

        const auto dome = tangent_bezier_datum(kGeo, pb.laws, 1.0, 1.0);
        double prev = 0;
        for (double lam : {0.6, 0.8, 1.0, 1.2, 1.4}) {
            const double T = measure_extinction(pb, dilate_datum(dome, lam, pb.laws), s);
            CHECK(T >= prev);
            prev = T;
        }
        const auto r = target_extinction(0.7, pb, dome, s);
        CHECK(std::abs(r.extinction_time - 0.7) < 0.01 * 0.7);
        CHECK(r.bisections <= 20);
    }

    TEST_CASE("ancient limit rejects time-dependent laws") {
        PeriodicShape shape;
        shape.mean = -0.2;
        shape.modes = {{0.05, 1, 0, 0.0}};
        const LawPair laws{make_discrete_similar_law(shape, 2.0, 1, LawKind::shrinking, kGeo, 1.0),
                           make_discrete_similar_law(shape, 2.0, 2, LawKind::shrinking, kGeo, 1.0)};
        const Problem pb{kGeo, Diffusivity::constant(1.0), laws};
        const auto dome = tangent_bezier_datum(kGeo, laws, 1.0, 1.0);
        CHECK_THROWS_AS(ancient_limit({1, 4, 16}, pb, dome, search()), PreconditionError);
    }
}
