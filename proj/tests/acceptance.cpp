// Acceptance run: one line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "wedge/error.hpp"
#include "wedge/selfsimilar.hpp"
#include "wedge/verify.hpp"

using namespace wedge;

namespace {

const SectorGeometry kGeo(oracle::pi / 4, 0.5);

LawPair constant_pair(double g) { return {BoundaryLaw::constant(1, g), BoundaryLaw::constant(2, g)}; }

LawPair sine_pair(double mean, LawKind kind, double horizon = 0.0) {
    PeriodicShape shape;
    shape.mean = mean;
    shape.modes = {{0.05, 1, 0, 0.0}};
    return {make_discrete_similar_law(shape, 2.0, 1, kind, kGeo, horizon),
            make_discrete_similar_law(shape, 2.0, 2, kind, kGeo, horizon)};
}

OrbitSearch search() { return OrbitSearch::from(RunConfig::defaults()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Criterion = std::function<Outcome()>;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome profiles() {
    std::ostringstream os;
    bool ok = true;
    for (double g : {0.2, -0.2}) {
        const auto t0 = std::chrono::steady_clock::now();
        const Profile p = g > 0 ? solve_phi(Diffusivity::constant(1.0), g, g, kGeo)
                                : solve_psi(Diffusivity::constant(1.0), g, g, kGeo);
        const double dt = seconds_since(t0);
        const auto o = oracle::Collocation([](double) { return 1.0; }, g, g, 1.0, g > 0 ? 1 : -1).solve(0.5, 0.5);
        const double e1 = std::abs(p.left - o.left) / o.left, e2 = std::abs(p.right - o.right) / o.right;
        const double sym = std::abs(p.left - p.right);
        ok = ok && e1 < 1e-6 && e2 < 1e-6 && sym < 1e-8 && dt < 1.0;
        os << (g > 0 ? "phi" : "psi") << " rel " << fmt("%.1e", std::max(e1, e2)) << " |p1-p2| "
           << fmt("%.1e", sym) << " time " << fmt("%.2fs", dt) << "; ";
    }
    return {ok, os.str()};
}

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

EvolutionOptions evolution_options() { return EvolutionOptions::from(RunConfig::defaults()); }

Outcome classical_degeneration() {
    const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(0.2)};
    const auto cd = build_convex_datum(kGeo, pb.laws, pb.a, 0.05);
    auto st = init_state(ChartId::v(), cd.datum, kGeo, 201, 1.0);
    EvolveRequest rq;
    rq.s_end = 8.0;
    rq.sample_s = {8.0};
    const auto tr = evolve(std::move(st), pb, rq, evolution_options());
    const auto vstar = log_image(solve_phi(pb.a, 0.2, 0.2, kGeo), tr.theta);
    double d = 0;
    for (std::size_t i = 0; i < vstar.size(); ++i) d = std::max(d, std::abs(tr.snapshots.back().values[i] - vstar[i]));
    return {d < 1e-3, "sup |v - v*| at s = 8: " + fmt("%.2e", d)};
}

Outcome discrete_expanding() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto laws = sine_pair(0.2, LawKind::expanding);
    const Problem pb{kGeo, Diffusivity::constant(1.0), laws};
    const auto cd = build_convex_datum(kGeo, laws, pb.a, 0.05, 2001, 1.0);
    const auto orbit = find_expanding_orbit(pb, cd.datum, search());
    const auto sim = similarity_residual(orbit);
    const double dt = seconds_since(t0);
    const bool ok = orbit.converged && orbit.periodicity_defect < 1e-3 && sim.residual_relative < 1e-2 &&
                    sim.endpoint_defect < 1e-2 && orbit.oscillation > 1e-3 && dt < 120;
    return {ok, "periodicity " + fmt("%.2e", orbit.periodicity_defect) + ", relative residual " + fmt("%.2e", sim.residual_relative) +
                    ", endpoints " + fmt("%.2e", sim.endpoint_defect) + ", oscillation " +
                    fmt("%.3f", orbit.oscillation) + ", time " + fmt("%.1fs", dt)};
}

Outcome uniqueness() {
    const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(0.2)};
    const auto convex = build_convex_datum(kGeo, pb.laws, pb.a, 0.05).datum;
    const auto other = tangent_bezier_datum(kGeo, pb.laws, 0.8, 1.2, 1.0);
    const auto a = find_expanding_orbit(pb, convex, search());
    const auto b = find_expanding_orbit(pb, other, search());
    double d = 0;
    for (int k = 0; k < a.nodes_per_period; ++k) {
        const double s = a.s_nodes[a.nodes_per_period] + a.period() * k / a.nodes_per_period;
        const auto fa = a.field(s), fb = b.field(s);
        for (std::size_t i = 0; i < fa.size(); ++i) d = std::max(d, std::abs(fa[i] - fb[i]));
    }
    auto st = init_state(ChartId::v(), convex, kGeo, 201, 1.0);
    EvolveRequest rq;
    rq.s_end = 4.0;
    rq.sample_s = sample_times(0.0, 4.0, 41);
    const auto mono = check_monotone_time(evolve(std::move(st), pb, rq, evolution_options()), true);
    return {a.converged && b.converged && d < 1e-3 && mono.pass,
            "orbit distance " + fmt("%.2e", d) + ", min relative increment " +
                fmt("%.2e", mono.value("min_relative_increment"))};
}

Outcome extinction() {
    const auto t0 = std::chrono::steady_clock::now();
    const Problem pb{kGeo, Diffusivity::constant(1.0), constant_pair(-0.2)};
    const auto s = search();
    const auto q = solve_psi(pb.a, -0.2, -0.2, kGeo);
    const double T = measure_extinction(pb, classical_datum(q, 1.0), s);
    bool ok = T >= 0.99 && T <= 1.01;
    std::ostringstream os;
    os << "classical T_ext " << fmt("%.5f", T);
    const auto dome = tangent_bezier_datum(kGeo, pb.laws, 1.0, 1.0);
    for (double target : {0.5, 0.8, 1.0, 1.3, 2.0}) {
        const auto r = target_extinction(target, pb, dome, s);
        const double err = std::abs(r.extinction_time - target) / target;
        ok = ok && err < 0.01 && r.bisections <= 20;
        os << "; T=" << target << " err " << fmt("%.1e", err) << " (" << r.bisections << " bisections)";
    }
    const double dt = seconds_since(t0);
    os << "; time " << fmt("%.1fs", dt);
    return {ok && dt < 60, os.str()};
}

Outcome shrinking_orbit() {
    const auto laws = sine_pair(-0.2, LawKind::shrinking, 1.0);
    const Problem pb{kGeo, Diffusivity::constant(1.0), laws};
    const auto s = search();
    const auto dome = tangent_bezier_datum(kGeo, laws, 1.0, 1.0);
    const auto target = target_extinction(1.0, pb, dome, s);
    const auto orbit = find_shrinking_orbit(pb, target.datum, 1.0, s, true);
    const auto sim = similarity_residual(orbit);
    const auto m = measure_delta(target.datum, pb.a, laws, kGeo, {});
    const auto win = w_window(m, kGeo);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& snap : orbit.history) {
        for (double w : snap.values) {
            lo = std::min(lo, w);
            hi = std::max(hi, w);
        }
    }
    const bool ok = orbit.converged && orbit.periodicity_defect < 1e-3 && sim.residual_relative < 1e-2 &&
                    sim.endpoint_defect < 1e-2 && lo >= win.lower && hi <= win.upper;
    return {ok, "periodicity " + fmt("%.2e", orbit.periodicity_defect) + ", relative residual " + fmt("%.2e", sim.residual_relative) +
                    ", endpoints " + fmt("%.2e", sim.endpoint_defect) + ", w in [" + fmt("%.3f", lo) + ", " +
                    fmt("%.3f", hi) + "] within [" + fmt("%.3f", win.lower) + ", " + fmt("%.3f", win.upper) + "]"};
}

Outcome area_law() {
    std::ostringstream os;
    bool ok = true;
    for (const auto& a : {Diffusivity::constant(1.0), Diffusivity::curvature()}) {
        for (double g : {0.2, -0.2}) {
            const LawPair laws = constant_pair(g);
            const Problem pb{kGeo, a, laws};
            const double t0 = g > 0 ? 1.0 : 0.0;
            const auto d = tangent_bezier_datum(kGeo, laws, 1.0, 1.0, t0);
            const ChartId chart = g > 0 ? ChartId::v() : ChartId::r();
            auto st = init_state(chart, d, kGeo, 201, t0);
            EvolveRequest rq;
            rq.s_end = st.s + (g > 0 ? 1.0 : 0.8);
            rq.sample_s = sample_times(st.s, rq.s_end, 21);
            const auto r = check_area_law(evolve(std::move(st), pb, rq, evolution_options()), a, laws, kGeo);
            ok = ok && r.pass && r.value("samples") >= 20;
            os << a.family_name() << " " << (g > 0 ? "+" : "-") << ": slope " << fmt("%.5f", r.value("slope"))
               << " vs " << fmt("%.5f", r.value("expected")) << "; ";
        }
    }
    return {ok, os.str()};
}

Outcome delta_ratio_bound() {
    const LawPair laws = constant_pair(-0.2);
    const auto dome = tangent_bezier_datum(kGeo, laws, 1.0, 1.0);
    const auto m = measure_delta(dome, Diffusivity::constant(1.0), laws, kGeo, {});
    const auto r = check_delta_ratio(m);
    const bool formula = std::abs(m.delta - 0.0625 / 5.0625) < 1e-15;
    return {r.pass && formula && m.T_plus > m.T_minus,
            "delta " + fmt("%.6f", m.delta) + ", T-/T+ = " + fmt("%.4f", m.T_minus / m.T_plus)};
}

Outcome invariant_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = run_suite(RunConfig::defaults());
    const double dt = seconds_since(t0);
    int failed = 0;
    std::string names;
    for (const auto& r : results) {
        if (!r.pass) {
            ++failed;
            names += " " + r.name;
        }
    }
    return {failed == 0 && !results.empty() && dt < 600,
            std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) + " checks" +
                (failed ? " (failed:" + names + ")" : std::string()) + ", time " + fmt("%.1fs", dt)};
}

Outcome ancient() {
    const auto s = search();
    PeriodicShape shape;
    shape.mean = -0.2;
    shape.modes = {{0.05, 1, 0, 0.0}};
    const LawPair laws{make_discrete_similar_law(shape, 2.0, 1, LawKind::autonomous, kGeo),
                       make_discrete_similar_law(shape, 2.0, 2, LawKind::autonomous, kGeo)};
    const Problem pb{kGeo, Diffusivity::constant(1.0), laws};
    const auto rep = ancient_limit({1, 4, 16}, pb, tangent_bezier_datum(kGeo, laws, 1.0, 1.0), s);
    const Problem pc{kGeo, Diffusivity::constant(1.0), constant_pair(-0.2)};
    const auto control = ancient_limit({1, 4, 16}, pc, tangent_bezier_datum(kGeo, pc.laws, 1.0, 1.0), s);
    double cmax = 0;
    for (double d : control.distances) cmax = std::max(cmax, d);
    const bool ok = rep.decreasing && rep.final_distance < 1e-1 && cmax < 1e-2;
    return {ok, "distances " + fmt("%.2e", rep.distances[0]) + " > " + fmt("%.2e", rep.distances[1]) +
                    ", constant-law control " + fmt("%.2e", cmax)};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const std::vector<std::pair<std::string, Criterion>> criteria{
        {"1 profile oracle agreement", profiles},
        {"2 classical degeneration", classical_degeneration},
        {"3 discrete selfsimilarity (expanding)", discrete_expanding},
        {"4 uniqueness and monotonicity", uniqueness},
        {"5 extinction exactness and targeting", extinction},
        {"6 shrinking orbit", shrinking_orbit},
        {"7 area law", area_law},
        {"8 delta ratio", delta_ratio_bound},
        {"9 invariant suite", invariant_suite},
        {"10 ancient limit", ancient},
    };
    int failed = 0, ran = 0;
    for (const auto& [name, run] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), std::atoi(name.c_str())) == only.end()) continue;
        ++ran;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d acceptance criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
