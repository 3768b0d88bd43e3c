#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "oracles.hpp"
#include "wedge/error.hpp"
#include "wedge/verify.hpp"

using namespace wedge;

namespace {
const SectorGeometry kGeo(oracle::pi / 4, 0.5);
LawPair constant_pair(double g) { return {BoundaryLaw::constant(1, g), BoundaryLaw::constant(2, g)}; }

EvolutionOptions options() {
    EvolutionOptions o;
    o.denominator_floor = 0.98 * kGeo.epsilon1();
    return o;
}

Trajectory run(const Problem& pb, const InitialDatum& d, const ChartId& chart, double t0, double span, int samples,
               const EvolutionOptions& opt = options()) {
    auto st = init_state(chart, d, pb.geometry, 201, t0);
    EvolveRequest rq;
    rq.s_end = st.s + span;
    rq.sample_s = sample_times(st.s, rq.s_end, samples);
    return evolve(std::move(st), pb, rq, opt);
}
}  // namespace

TEST_SUITE("verify") {
    TEST_CASE("delta formula") {
        CHECK(delta_ratio(kGeo, 0.4, 0.4) == doctest::Approx(0.0625 / 5.0625).epsilon(1e-15));
        CHECK(delta_ratio(kGeo, 0.4, 0.4) == doctest::Approx(0.012346).epsilon(1e-4));
        // nonconstant law: psi with the extreme slopes, contacts from the oracle
        PeriodicShape shape;
        shape.mean = -0.2;
        shape.modes = {{0.05, 1, 0, 0.0}};
        const LawPair laws{make_discrete_similar_law(shape, 2.0, 1, LawKind::autonomous, kGeo),
                           make_discrete_similar_law(shape, 2.0, 2, LawKind::autonomous, kGeo)};
        const auto dome = tangent_bezier_datum(kGeo, laws, 1.0, 1.0);
        const auto m = measure_delta(dome, Diffusivity::constant(1.0), laws, kGeo, {});
        auto one = [](double) { return 1.0; };
        const double kmin = laws.left.min_value(), kmax = laws.left.max_value();
        const auto om = oracle::Collocation(one, kmin, kmin, 1.0, -1).solve(0.4, 0.4);
        const auto op = oracle::Collocation(one, kmax, kmax, 1.0, -1).solve(0.4, 0.4);
        const double expected = std::pow(0.5 / 1.5, 4) * op.right * op.right / (om.right * om.right);
        CHECK(m.delta == doctest::Approx(expected).epsilon(1e-6));
        CHECK(m.delta != doctest::Approx(0.0625 / 5.0625));
        const auto r = check_delta_ratio(m);
        CHECK(r.pass);
        CHECK(r.value("T_plus") > r.value("T_minus"));
    }

    TEST_CASE("area law slopes") {
        const auto d1 = tangent_bezier_datum(kGeo, constant_pair(0.2), 1.0, 1.0, 1.0);
        for (const auto& a : {Diffusivity::constant(1.0), Diffusivity::curvature()}) {
            const Problem up{kGeo, a, constant_pair(0.2)};
            const auto r = check_area_law(run(up, d1, ChartId::v(), 1.0, 1.0, 21), a, up.laws, kGeo);
            CHECK(r.pass);
            CHECK(r.value("expected") == doctest::Approx(a.integral(-0.2, 0.2)));
        }
        const auto d2 = tangent_bezier_datum(kGeo, constant_pair(-0.2), 1.0, 1.0);
        const Problem down{kGeo, Diffusivity::constant(1.0), constant_pair(-0.2)};
        const auto tr = run(down, d2, ChartId::r(), 0.0, 1.0, 21);
        const auto r = check_area_law(tr, down.a, down.laws, kGeo);
        CHECK(r.pass);
        CHECK(r.value("slope") == doctest::Approx(-0.4).epsilon(0.01));
        const auto few = run(down, d2, ChartId::r(), 0.0, 0.5, 4);
        CHECK_THROWS_AS(check_area_law(few, down.a, down.laws, kGeo), PreconditionError);
    }

    TEST_CASE("gradient bound, comparison and monotonicity") {
        const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(0.2)};
        const auto cd = build_convex_datum(kGeo, pb.laws, pb.a, 0.05, 2001, 1.0);
        const auto tr = run(pb, cd.datum, ChartId::v(), 1.0, 2.0, 11);
        const auto g = check_gradient_bound(tr, kGeo);
        CHECK(g.pass);
        CHECK(g.value("bound") == doctest::Approx(0.5));
        const auto same = check_comparison(tr, tr);
        CHECK(same.pass);
        CHECK(same.value("min_radius_gap") == 0.0);
        CHECK(check_monotone_time(tr, true).pass);
        const auto skipped = check_monotone_time(tr, false);
        CHECK(skipped.skipped);
        CHECK(skipped.pass);
        auto coarse_state = init_state(ChartId::v(), cd.datum, kGeo, 101, 1.0);
        EvolveRequest rq;
        rq.s_end = 0.1;
        rq.sample_s = {0.1};
        const auto coarse = evolve(coarse_state, pb, rq, options());
        CHECK_THROWS_AS(check_comparison(tr, coarse), PreconditionError);
    }

    TEST_CASE("a near-extremal datum keeps the gradient bound") {
        // slopes close to tan(beta) - sigma at the contacts
        const LawPair laws{BoundaryLaw::constant(1, 0.49), BoundaryLaw::constant(2, 0.49)};
        const Problem pb{kGeo, Diffusivity::constant(1.0), laws};
        const auto d = tangent_bezier_datum(kGeo, laws, 1.0, 1.0, 1.0);
        CHECK(check_gradient_bound(run(pb, d, ChartId::v(), 1.0, 1.0, 11), kGeo).pass);
    }

    TEST_CASE("w window contains the classical shrinking orbit") {
        const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(-0.2)};
        const auto dome = tangent_bezier_datum(kGeo, pb.laws, 1.0, 1.0);
        const auto m = measure_delta(dome, pb.a, pb.laws, kGeo, {});
        const auto w = w_window(m, kGeo);
        CHECK(w.lower < w.upper);
        const auto q = solve_psi(pb.a, -0.2, -0.2, kGeo);
        const auto st = init_state(ChartId::w(1.0), classical_datum(q, 1.0), kGeo, 101);
        for (double v : st.values) {
            CHECK(v >= w.lower);
            CHECK(v <= w.upper);
        }
    }

    TEST_CASE("suite selection and report") {
        auto kv = KeyValueConfig();
        kv.set("verify.checks", "none");
        CHECK(run_suite(RunConfig::from(kv)).empty());
        kv.set("verify.checks", "chart_round_trip,tan_addition");
        const auto rs = run_suite(RunConfig::from(kv));
        REQUIRE(rs.size() == 2);
        CHECK(rs[0].pass);
        CHECK(rs[1].pass);
        CHECK(rs[0].value("max_defect") < 1e-12);
        const auto j = nlohmann::json::parse(report_json(rs, "abc"));
        CHECK(j["passed"] == 2);
        CHECK(j["checks"][0]["name"] == "chart_round_trip");
        CHECK(report_json(rs, "abc") == report_json(run_suite(RunConfig::from(kv)), "abc"));
        kv.set("verify.checks", "nonsense");
        CHECK_THROWS_AS(run_suite(RunConfig::from(kv)), ConfigError);

        KeyValueConfig bad;
        bad.set("geometry.sigma", "1.5");
        const auto failed = run_suite(bad);
        REQUIRE(failed.size() == 1);
        CHECK_FALSE(failed[0].pass);
        CHECK(failed[0].name == "construction");
    }
}
