#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wedge/error.hpp"
#include "wedge/evolution.hpp"
#include "wedge/profile.hpp"

using namespace wedge;

namespace {
const SectorGeometry kGeo(oracle::pi / 4, 0.5);
LawPair constant_pair(double g) { return {BoundaryLaw::constant(1, g), BoundaryLaw::constant(2, g)}; }

EvolutionOptions fixed_step(double ds) {
    EvolutionOptions o;
    o.adaptive = false;
    o.ds = ds;
    o.denominator_floor = 0.98 * kGeo.epsilon1();
    return o;
}

EvolutionOptions adaptive() {
    EvolutionOptions o;
    o.denominator_floor = 0.98 * kGeo.epsilon1();
    return o;
}

// limiting v-chart image of sqrt(2t) phi(x / sqrt(2t)):
// e^{v} cos(theta) = sqrt(2) phi(e^{v} sin(theta) / sqrt(2))
std::vector<double> steady_image(const Profile& p, const std::vector<double>& theta) {
    std::vector<double> v;
    for (double th : theta) {
        const double R = oracle::bisect(
            [&](double R) { return R * std::cos(th) - std::sqrt(2.0) * p.value_at(R * std::sin(th) / std::sqrt(2.0)); },
            1e-3, 10.0);
        v.push_back(std::log(R));
    }
    return v;
}
}  // namespace

TEST_SUITE("evolution") {
    TEST_CASE("circular arc is a constant omega field") {
        const SectorGeometry g(1.2, 0.5);
        const double R = 1.3;
        const double xe = R * std::sin(g.theta0());
        const auto d = InitialDatum::sample(
            xe, xe, 2001, [&](double x) { return std::sqrt(R * R - x * x); },
            [&](double x) { return -x / std::sqrt(R * R - x * x); });
        const auto st = init_state(ChartId::omega(), d, g, 101);
        for (double q : st.values) CHECK(q == doctest::Approx(std::log(R)).epsilon(1e-9));
        CHECK_THROWS_AS(init_state(ChartId::omega(), d, g, 100), PreconditionError);
    }

    TEST_CASE("init then recover is second order") {
        const auto laws = constant_pair(0.2);
        const auto cd = build_convex_datum(kGeo, laws, Diffusivity::constant(1.0), 0.05);
        std::vector<double> err;
        for (std::size_t n : {51, 101}) {
            const auto rec = init_state(ChartId::v(), cd.datum, kGeo, n, 1.0).recover();
            double worst = 0;
            for (int i = 0; i <= 500; ++i) {
                const double x = -rec.xi1 + (rec.xi1 + rec.xi2) * i / 500.0;
                worst = std::max(worst, std::abs(rec.value(x) - cd.datum.value(x)));
            }
            err.push_back(worst);
        }
        CHECK(err[0] / err[1] > 3.5);
    }

    // Largest per-unit-time drift of the sampled classical image; a pure truncation effect.
    double steady_drift(int n) {
        const auto p = solve_phi(Diffusivity::constant(1.0), 0.2, 0.2, kGeo);
        const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(0.2)};
        EvolutionState st;
        st.chart = ChartId::v();
        st.theta = theta_grid(kGeo, n);
        st.values = steady_image(p, st.theta);
        const double dt = 1e-3;
        double worst = 0;
        for (int k = 0; k < 200; ++k) {
            auto next = step(st, pb, dt, fixed_step(dt));
            for (std::size_t i = 0; i < st.values.size(); ++i)
                worst = std::max(worst, std::abs(next.values[i] - st.values[i]) / dt);
            st = std::move(next);
        }
        return worst;
    }

    TEST_CASE("the classical steady image is stationary in the v chart") {
        const double coarse = steady_drift(101), fine = steady_drift(201);
        CHECK(fine < 1e-2);
        CHECK(coarse / fine > 3.5);
    }

    // Displacement of a zero-curvature segment after a short run in the r chart.
    double segment_drift(int n) {
        // u = 1 + 0.1 x with k1 = -0.1, k2 = 0.1 has zero curvature
        const LawPair laws{BoundaryLaw::constant(1, -0.1), BoundaryLaw::constant(2, 0.1)};
        const double x1 = 1.0 / (1.0 + 0.1), x2 = 1.0 / (1.0 - 0.1);
        const auto d = InitialDatum::sample(
            x1, x2, 2001, [](double x) { return 1.0 + 0.1 * x; }, [](double) { return 0.1; });
        const Problem pb{kGeo, Diffusivity::constant(1.0), laws};
        auto st = init_state(ChartId::r(), d, kGeo, n);
        const auto start = st.values;
        for (int k = 0; k < 100; ++k) st = step(st, pb, 1e-3, fixed_step(1e-3));
        double worst = 0;
        for (std::size_t i = 0; i < start.size(); ++i) worst = std::max(worst, std::abs(st.values[i] - start[i]));
        return worst;
    }

    TEST_CASE("straight segments barely move in the r chart") {
        const double coarse = segment_drift(101), fine = segment_drift(201);
        CHECK(fine < 1e-4);
        CHECK(coarse / fine > 3.5);
    }

    TEST_CASE("semi-implicit steps are first order in time") {
        const auto laws = constant_pair(0.2);
        const auto cd = build_convex_datum(kGeo, laws, Diffusivity::constant(1.0), 0.05);
        const Problem pb{kGeo, Diffusivity::constant(1.0), laws};
        const auto st = init_state(ChartId::v(), cd.datum, kGeo, 101, 1.0);
        auto defect = [&](double ds) {
            const auto one = step(st, pb, ds, fixed_step(ds));
            auto ref = st;
            for (int k = 0; k < 4; ++k) ref = step(ref, pb, ds / 4, fixed_step(ds / 4));
            double worst = 0;
            for (std::size_t i = 0; i < one.values.size(); ++i)
                worst = std::max(worst, std::abs(one.values[i] - ref.values[i]));
            return worst;
        };
        const double ratio = defect(2e-3) / defect(1e-3);
        CHECK(ratio > 1.8);
        CHECK(ratio < 4.5);
    }

    TEST_CASE("explicit and semi-implicit rules agree") {
        const auto laws = constant_pair(0.2);
        const auto cd = build_convex_datum(kGeo, laws, Diffusivity::constant(1.0), 0.05);
        const Problem pb{kGeo, Diffusivity::constant(1.0), laws};
        const auto st = init_state(ChartId::v(), cd.datum, kGeo, 81, 1.0);
        EvolveRequest rq;
        rq.s_end = 0.3;
        rq.sample_s = {0.3};
        auto ex = adaptive();
        ex.rule = TimeRule::explicit_cfl;
        ex.adaptive = false;
        CHECK(explicit_step_limit(st, pb, 0.4) > 0.0);
        const auto a = evolve(st, pb, rq, ex);
        const auto b = evolve(st, pb, rq, adaptive());
        double worst = 0;
        for (std::size_t i = 0; i < st.values.size(); ++i)
            worst = std::max(worst, std::abs(a.snapshots[0].values[i] - b.snapshots[0].values[i]));
        CHECK(worst < 1e-3);
        CHECK(a.diagnostics.min_denominator > 0.0);
    }

    TEST_CASE("classical shrinking datum is stationary in the w chart") {
        const auto q = solve_psi(Diffusivity::constant(1.0), -0.2, -0.2, kGeo);
        const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(-0.2)};
        const auto st = init_state(ChartId::w(1.0), classical_datum(q, 1.0), kGeo, 201, 0.0);
        EvolveRequest rq;
        rq.s_end = 2.0;
        rq.sample_s = sample_times(0.0, 2.0, 5);
        const auto tr = evolve(st, pb, rq, adaptive());
        double drift = 0;
        for (const auto& snap : tr.snapshots) {
            for (std::size_t i = 0; i < st.values.size(); ++i)
                drift = std::max(drift, std::abs(snap.values[i] - st.values[i]));
        }
        CHECK(drift < 1e-3);
    }

    TEST_CASE("classical shrinking datum extinguishes at T = 1") {
        const auto q = solve_psi(Diffusivity::constant(1.0), -0.2, -0.2, kGeo);
        const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(-0.2)};
        const auto st = init_state(ChartId::r(), classical_datum(q, 1.0), kGeo, 201, 0.0);
        EvolveRequest rq;
        rq.s_end = 5.0;
        rq.sample_s = {0.5};
        rq.stop_on_extinction = true;
        const auto tr = evolve(st, pb, rq, adaptive());
        REQUIRE(tr.extinct);
        CHECK(tr.extinction_time == doctest::Approx(1.0).epsilon(0.01));
    }

    TEST_CASE("u(0, t) grows for the convex datum") {
        const auto laws = constant_pair(0.2);
        const auto cd = build_convex_datum(kGeo, laws, Diffusivity::constant(1.0), 0.05);
        const Problem pb{kGeo, Diffusivity::constant(1.0), laws};
        const auto st = init_state(ChartId::v(), cd.datum, kGeo, 201, 1.0);
        EvolveRequest rq;
        rq.s_end = 3.0;
        rq.sample_s = sample_times(0.0, 3.0, 100);
        const auto tr = evolve(st, pb, rq, adaptive());
        const std::size_t mid = st.values.size() / 2;
        double prev = -1;
        bool monotone = true;
        for (const auto& snap : tr.snapshots) {
            const double u0 = chart_radius(tr.chart, snap.values[mid], snap.s);
            if (u0 < prev - 1e-8) monotone = false;
            prev = u0;
        }
        CHECK(monotone);
    }
}
