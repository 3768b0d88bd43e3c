#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wedge/error.hpp"
#include "wedge/profile.hpp"
#include "wedge/sandwich.hpp"

using namespace wedge;

namespace {
const SectorGeometry kGeo(oracle::pi / 4, 0.5);
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_SUITE("profiles") {
    TEST_CASE("expanding profile agrees with the closed form and the collocation oracle") {
        const auto p = solve_phi(Diffusivity::constant(1.0), 0.2, 0.2, kGeo);
        const double closed = oracle::phi_symmetric_contact(0.2, 1.0);
        CHECK(rel(p.left, closed) < 1e-8);
        CHECK(std::abs(p.left - p.right) < 1e-8);
        CHECK(std::abs(p.slope0) < 1e-8);
        const auto o = oracle::Collocation([](double) { return 1.0; }, 0.2, 0.2, 1.0, +1).solve(0.5, 0.5);
        CHECK(rel(p.left, o.left) < 1e-6);
        CHECK(rel(p.value0, o.value0) < 1e-6);
        // frozen reference triple
        CHECK(p.left == doctest::Approx(0.48094892376).epsilon(1e-9));
        CHECK(p.ode_residual() < 1e-8);
        CHECK(p.min_value > 0.0);
        CHECK(p.value.front() == doctest::Approx(p.left * 1.0).epsilon(1e-10));
        CHECK(p.slope.back() == doctest::Approx(0.2).epsilon(1e-9));
    }

    TEST_CASE("shrinking profile agrees with the closed form and is concave") {
        const auto q = solve_psi(Diffusivity::constant(1.0), -0.2, -0.2, kGeo);
        const double closed = oracle::psi_symmetric_contact(-0.2, 1.0);
        CHECK(rel(q.left, closed) < 1e-8);
        CHECK(std::abs(q.left - q.right) < 1e-8);
        const auto o = oracle::Collocation([](double) { return 1.0; }, -0.2, -0.2, 1.0, -1).solve(0.4, 0.4);
        CHECK(rel(q.right, o.right) < 1e-6);
        CHECK(rel(q.value0, o.value0) < 1e-6);
        CHECK(q.left == doctest::Approx(0.42037787589).epsilon(1e-9));
        for (double z : q.z) CHECK(q.second_derivative_at(z) < 0.0);
    }

    TEST_CASE("asymmetric and curvature profiles against the oracle") {
        auto curv = [](double p) { return 1.0 / (1.0 + p * p); };
        struct Case {
            double g1, g2;
            bool curvature;
        };
        for (const Case c : {Case{0.1, 0.3, false}, Case{-0.1, -0.3, false}, Case{0.2, 0.2, true},
                             Case{-0.2, -0.2, true}, Case{0.3, -0.1, true}}) {
            const Diffusivity a = c.curvature ? Diffusivity::curvature() : Diffusivity::constant(1.0);
            const int sign = c.g1 + c.g2 > 0 ? 1 : -1;
            const Profile p = sign > 0 ? solve_phi(a, c.g1, c.g2, kGeo) : solve_psi(a, c.g1, c.g2, kGeo);
            std::function<double(double)> af = curv;
            if (!c.curvature) af = [](double) { return 1.0; };
            const auto o = oracle::Collocation(af, c.g1, c.g2, 1.0, sign).solve(0.45, 0.45);
            CHECK(rel(p.left, o.left) < 1e-6);
            CHECK(rel(p.right, o.right) < 1e-6);
            CHECK(p.ode_residual() < 1e-8);
        }
    }

    TEST_CASE("profile preconditions") {
        CHECK_THROWS_AS(solve_phi(Diffusivity::constant(1.0), 0.2, -0.2, kGeo), PreconditionError);
        CHECK_THROWS_AS(solve_psi(Diffusivity::constant(1.0), 0.2, 0.1, kGeo), PreconditionError);
        CHECK_THROWS_AS(solve_phi(Diffusivity::constant(1.0), 0.7, 0.2, kGeo), PreconditionError);
    }

    TEST_CASE("classical solutions") {
        const auto p = solve_phi(Diffusivity::constant(1.0), 0.2, 0.2, kGeo);
        // 2(t + c) = 1 gives the unit scaling
        CHECK(*classical_eval(p, 0.0, 0.25, 0.25) == doctest::Approx(p.value0).epsilon(1e-14));
        for (double x : {-0.3, 0.0, 0.2}) {
            for (double t : {0.3, 1.7}) {
                const auto a = classical_eval(p, 2 * x, 4 * t, 0.0);
                const auto b = classical_eval(p, x, t, 0.0);
                REQUIRE(a.has_value());
                CHECK(*a / 2 == doctest::Approx(*b).epsilon(1e-13));
            }
        }
        CHECK_FALSE(classical_eval(p, 5.0, 0.5, 0.0).has_value());
        const auto d = classical_datum(p, 0.5);
        CHECK(d.xi01() == doctest::Approx(p.left).epsilon(1e-14));
        CHECK(d.xi02() == doctest::Approx(p.right).epsilon(1e-14));

        const auto q = solve_psi(Diffusivity::constant(1.0), -0.2, -0.2, kGeo);
        double worst = 0;
        for (int i = -10; i <= 10; ++i) {
            if (auto v = classical_eval(q, 1e-5 * i / 10, 1.0 - 1e-8, 1.0)) worst = std::max(worst, *v);
        }
        CHECK(worst < 1e-3);
        const auto dq = classical_datum(q, 1.0);
        CHECK(dq.xi01() == doctest::Approx(q.left * std::sqrt(2.0)));
    }

    TEST_CASE("sandwich parameters") {
        const auto q = solve_psi(Diffusivity::constant(1.0), -0.2, -0.2, kGeo);
        const auto d = classical_datum(q, 1.0);
        const auto sw = sandwich_parameters(d, q, q);
        CHECK(sw.lower == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(sw.upper == doctest::Approx(1.0).epsilon(1e-6));

        const auto p = solve_phi(Diffusivity::constant(1.0), 0.2, 0.2, kGeo);
        const auto dp = classical_datum(p, 0.7);
        const auto swp = sandwich_parameters(dp, p, p);
        CHECK(swp.lower == doctest::Approx(0.7).epsilon(1e-6));
        CHECK(swp.upper == doctest::Approx(0.7).epsilon(1e-6));
        // a larger datum never lowers the parameters
        const auto bigger = classical_datum(p, 1.4);
        const auto swb = sandwich_parameters(bigger, p, p);
        CHECK(swb.lower >= swp.lower);
        CHECK(swb.upper >= swp.upper);
    }

    TEST_CASE("sandwich of the convex datum") {
        const LawPair laws{BoundaryLaw::constant(1, 0.2), BoundaryLaw::constant(2, 0.2)};
        const auto cd = build_convex_datum(kGeo, laws, Diffusivity::constant(1.0), 0.05);
        const auto p = solve_phi(Diffusivity::constant(1.0), 0.2, 0.2, kGeo);
        const auto sw = sandwich_parameters(cd.datum, p, p);
        CHECK(sw.lower > 0.0);
        CHECK(sw.upper > sw.lower);
        CHECK(classical_excess(cd.datum, p, sw.lower, 1000) == doctest::Approx(0.0).epsilon(1e-6));
    }
}
