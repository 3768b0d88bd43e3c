#include "wedge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <sstream>

#include <json.hpp>

#include "wedge/error.hpp"
#include "wedge/numerics.hpp"
#include "wedge/selfsimilar.hpp"

namespace wedge {

double CheckResult::value(const std::string& key) const {
    for (const auto& [k, v] : measured) {
        if (k == key) return v;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

CheckResult check_gradient_bound(const Trajectory& trajectory, const SectorGeometry& geometry) {
    CheckResult r;
    r.name = "gradient_bound";
    r.claim = "|u_x| <= tan(beta) - sigma along the flow";
    const double h = trajectory.theta[1] - trajectory.theta[0];
    r.threshold = geometry.max_slope() + 5 * h * h;
    double worst = 0.0;
    for (std::size_t i = 0; i < trajectory.snapshots.size(); ++i) {
        const auto rec = trajectory.recover(i);
        for (double ux : rec.ux_nodes) worst = std::max(worst, std::abs(ux));
    }
    r.measured = {{"max_abs_ux", worst}, {"bound", geometry.max_slope()},
                  {"snapshots", static_cast<double>(trajectory.snapshots.size())}};
    r.pass = worst <= r.threshold;
    return r;
}

CheckResult check_comparison(const Trajectory& low, const Trajectory& high, double slack) {
    if (low.theta.size() != high.theta.size() || low.snapshots.size() != high.snapshots.size() ||
        low.chart.kind != high.chart.kind) {
        throw PreconditionError("comparison needs runs on the same chart, grid and sample times");
    }
    CheckResult r;
    r.name = "comparison";
    r.claim = "ordered data stay ordered";
    r.threshold = slack;
    double gap = INFINITY;
    for (std::size_t k = 0; k < low.snapshots.size(); ++k) {
        const auto& a = low.snapshots[k];
        const auto& b = high.snapshots[k];
        if (std::abs(a.s - b.s) > 1e-12 * (1 + std::abs(a.s)))
            throw PreconditionError("comparison runs sampled at different times");
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            const double Rl = chart_radius(low.chart, a.values[i], a.s);
            const double Rh = chart_radius(high.chart, b.values[i], b.s);
            gap = std::min(gap, Rh - Rl);
        }
    }
    r.measured = {{"min_radius_gap", gap}};
    r.pass = gap >= -slack;
    return r;
}

CheckResult check_area_law(const Trajectory& trajectory, const Diffusivity& a, const LawPair& laws,
                           const SectorGeometry& geometry, double rel_tol) {
    CheckResult r;
    r.name = "area_law";
    r.claim = "D'(t) = integral of a over [-gamma1, gamma2]";
    r.threshold = rel_tol;
    if (laws.left.kind() != LawKind::constant || laws.right.kind() != LawKind::constant) {
        r.skipped = true;
        r.pass = true;
        r.note = "requires constant laws";
        return r;
    }
    const std::size_t m = trajectory.snapshots.size();
    if (m < 5) throw PreconditionError("area law needs at least 5 samples");
    std::vector<double> t(m), D(m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto rec = trajectory.recover(k, 2001);
        const double hx = (rec.xi1 + rec.xi2) / 2000.0;
        D[k] = num::simpson(rec.u, hx) - 0.5 * (rec.xi1 * rec.xi1 + rec.xi2 * rec.xi2) * geometry.tan_beta();
        t[k] = trajectory.snapshots[k].t;
    }
    double tm = 0, Dm = 0;
    for (std::size_t k = 0; k < m; ++k) {
        tm += t[k];
        Dm += D[k];
    }
    tm /= m;
    Dm /= m;
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < m; ++k) {
        sxy += (t[k] - tm) * (D[k] - Dm);
        sxx += (t[k] - tm) * (t[k] - tm);
    }
    const double slope = sxy / sxx;
    double rms = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double e = D[k] - (Dm + slope * (t[k] - tm));
        rms += e * e;
    }
    rms = std::sqrt(rms / m);
    const double expected = a.integral(-laws.left.gamma(), laws.right.gamma());
    const double rel = std::abs(slope - expected) / std::abs(expected);
    const double span = t.back() - t.front();
    r.measured = {{"slope", slope},
                  {"expected", expected},
                  {"relative_error", rel},
                  {"fit_rms", rms},
                  {"fit_rms_bound", 1e-2 * std::abs(slope) * std::abs(span)},
                  {"samples", static_cast<double>(m)}};
    r.pass = rel < rel_tol && rms < 1e-2 * std::abs(slope) * std::abs(span);
    return r;
}

double delta_ratio(const SectorGeometry& geometry, double q2_plus, double q2_minus) {
    const double s = geometry.sigma();
    const double ratio = s / (2 * geometry.tan_beta() - s);
    return std::pow(ratio, 4) * (q2_plus * q2_plus) / (q2_minus * q2_minus);
}

DeltaMeasurement measure_delta(const InitialDatum& datum, const Diffusivity& a, const LawPair& laws,
                               const SectorGeometry& geometry, const ProfileOptions& options) {
    DeltaMeasurement m;
    m.psi_minus = solve_psi(a, laws.left.min_value(), laws.right.min_value(), geometry, options);
    m.psi_plus = solve_psi(a, laws.left.max_value(), laws.right.max_value(), geometry, options);
    m.q2_minus = m.psi_minus.right;
    m.q2_plus = m.psi_plus.right;
    m.delta = delta_ratio(geometry, m.q2_plus, m.q2_minus);
    const auto sw = sandwich_parameters(datum, m.psi_minus, m.psi_plus);
    m.T_minus = sw.lower;
    m.T_plus = sw.upper;
    return m;
}

CheckResult check_delta_ratio(const DeltaMeasurement& m) {
    CheckResult r;
    r.name = "delta_ratio";
    r.claim = "T+ > T- >= delta T+";
    r.threshold = m.delta;
    r.measured = {{"delta", m.delta},
                  {"T_minus", m.T_minus},
                  {"T_plus", m.T_plus},
                  {"ratio", m.T_minus / m.T_plus},
                  {"q2_minus", m.q2_minus},
                  {"q2_plus", m.q2_plus}};
    r.pass = m.T_plus > m.T_minus && m.T_minus >= m.delta * m.T_plus;
    return r;
}

WWindow w_window(const DeltaMeasurement& m, const SectorGeometry& geometry) {
    const double d = m.delta;
    const double d1 = 1.0 + 1.0 / (d * (1.0 + d));
    WWindow w;
    w.lower = -std::log(m.psi_plus.max_value / std::cos(geometry.theta0()) * std::sqrt(2.0 * d1));
    w.upper = -std::log(m.psi_minus.min_value * std::sqrt(2.0 * d / (1.0 + d)));
    return w;
}

CheckResult check_monotone_time(const Trajectory& trajectory, bool convex_datum, double rel_slack) {
    CheckResult r;
    r.name = "monotone_time";
    r.claim = "u_t > 0 for convex data";
    r.threshold = rel_slack;
    if (!convex_datum) {
        r.skipped = true;
        r.pass = true;
        r.note = "not applicable: datum is not convex";
        return r;
    }
    double worst = INFINITY;
    for (std::size_t k = 0; k + 1 < trajectory.snapshots.size(); ++k) {
        const auto a = trajectory.recover(k);
        const auto b = trajectory.recover(k + 1);
        const double scale = *std::max_element(b.u_nodes.begin(), b.u_nodes.end());
        for (std::size_t j = 1; j + 1 < a.x_nodes.size(); ++j) {
            const double x = a.x_nodes[j];
            if (x < -b.xi1 || x > b.xi2) continue;
            worst = std::min(worst, (b.value(x) - a.u_nodes[j]) / scale);
        }
    }
    r.measured = {{"min_relative_increment", worst}};
    r.pass = worst >= -rel_slack;
    return r;
}

std::vector<std::string> suite_check_names() {
    return {"law_validation", "profiles",       "chart_round_trip", "tan_addition",
            "transfer_periodicity", "gradient_bound", "comparison", "sandwich",
            "area_law",       "delta_ratio",    "monotone_time",  "cross_chart",
            "expanding_orbit", "shrinking_orbit"};
}

namespace {

struct Scenario {
    LawPair laws;
    InitialDatum datum;
};

LawPair constant_pair(double g) { return {BoundaryLaw::constant(1, g), BoundaryLaw::constant(2, g)}; }

Scenario expanding_scenario(const RunConfig& c) {
    Scenario sc;
    sc.laws = c.laws.left.min_value() + c.laws.right.min_value() > 0.0 ? c.laws : constant_pair(0.2);
    sc.datum = build_convex_datum(c.geometry, sc.laws, c.diffusivity, c.datum.epsilon, 2001,
                                  c.evolution.start_time)
                   .datum;
    return sc;
}

Scenario shrinking_scenario(const RunConfig& c) {
    Scenario sc;
    sc.laws = c.laws.left.max_value() + c.laws.right.max_value() < 0.0 ? c.laws : constant_pair(-0.2);
    sc.datum = tangent_bezier_datum(c.geometry, sc.laws, 1.0, 1.0);
    return sc;
}

Trajectory run(const RunConfig& c, const ChartId& chart, const LawPair& laws, const InitialDatum& d,
               double t0, double s_span, int samples, const EvolutionOptions& opt) {
    const Problem pb{c.geometry, c.diffusivity, laws};
    auto st = init_state(chart, d, c.geometry, c.grid_points, t0);
    EvolveRequest rq;
    rq.s_end = st.s + s_span;
    rq.sample_s = sample_times(st.s, rq.s_end, samples);
    return evolve(std::move(st), pb, rq, opt);
}

CheckResult law_check(const RunConfig& c) {
    CheckResult r;
    r.name = "law_validation";
    r.claim = "laws satisfy their similarity identity and the slope margin";
    r.threshold = 1e-12;
    const auto a = validate_boundary_law(c.laws.left, c.geometry);
    const auto b = validate_boundary_law(c.laws.right, c.geometry);
    r.measured = {{"defect_1", a.similarity_defect}, {"defect_2", b.similarity_defect},
                  {"k0_1", a.lattice_min},           {"K0_1", a.lattice_max},
                  {"k0_2", b.lattice_min},           {"K0_2", b.lattice_max}};
    r.pass = a.pass() && b.pass();
    for (const auto& m : a.messages) r.note += m + "; ";
    for (const auto& m : b.messages) r.note += m + "; ";
    return r;
}

CheckResult profile_check(const RunConfig& c) {
    CheckResult r;
    r.name = "profiles";
    r.claim = "profile ODE residual and contact geometry";
    r.threshold = 1e-8;
    ProfileOptions po;
    po.shoot_tol = c.tol.shoot;
    po.samples = c.profile_samples;
    po.z_max = c.profile_z_max;
    const auto phi = solve_phi(c.diffusivity, 0.2, 0.2, c.geometry, po);
    const auto psi = solve_psi(c.diffusivity, -0.2, -0.2, c.geometry, po);
    double geo = 0.0;
    for (const Profile* p : {&phi, &psi}) {
        geo = std::max({geo, std::abs(p->value.front() - p->left * c.geometry.tan_beta()) / (1 + p->left),
                        std::abs(p->value.back() - p->right * c.geometry.tan_beta()) / (1 + p->right)});
    }
    double concave = -INFINITY;
    for (double zq : psi.z) concave = std::max(concave, psi.second_derivative_at(zq));
    r.measured = {{"phi_ode_residual", phi.ode_residual()},
                  {"psi_ode_residual", psi.ode_residual()},
                  {"endpoint_geometry", geo},
                  {"psi_max_second_derivative", concave}};
    r.pass = phi.ode_residual() < 1e-8 && psi.ode_residual() < 1e-8 && geo < 1e-8 && concave < 0.0;
    return r;
}

CheckResult round_trip_check(const RunConfig& c) {
    CheckResult r;
    r.name = "chart_round_trip";
    r.claim = "to_chart and from_chart are inverse";
    r.threshold = 1e-12;
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double th0 = c.geometry.theta0();
    const std::vector<ChartId> charts{ChartId::omega(), ChartId::v(1.0), ChartId::v(10.0), ChartId::v(),
                                      ChartId::w(1.0), ChartId::r()};
    double worst = 0.0;
    for (const auto& ch : charts) {
        for (int i = 0; i < 1000; ++i) {
            const double th = -th0 + 2 * th0 * U(rng);
            const double R = std::exp(std::log(1e-2) + std::log(1e4) * U(rng));
            double t = 0.01 + 3 * U(rng);
            if (ch.kind == ChartKind::w) t = ch.T * 0.999 * U(rng);
            const double x = R * std::sin(th), y = R * std::cos(th);
            const auto p = to_chart(ch, x, y, t);
            const auto back = from_chart(ch, p);
            worst = std::max({worst, std::hypot(back.x - x, back.y - y) / R,
                              std::abs(back.t - t) / (1 + std::abs(t))});
            // and the reverse direction
            const auto q = to_chart(ch, back.x, back.y, back.t);
            worst = std::max({worst, std::abs(q.theta - p.theta),
                              std::abs(q.rho - p.rho) / (1 + std::abs(p.rho)),
                              std::abs(q.s - p.s) / (1 + std::abs(p.s))});
        }
    }
    r.measured = {{"max_defect", worst}, {"points", 6000}};
    r.pass = worst < r.threshold;
    return r;
}

CheckResult tan_addition_check(const RunConfig&) {
    CheckResult r;
    r.name = "tan_addition";
    r.claim = "transfer = tan(theta0 + arctan k) (times r in the r chart)";
    r.threshold = 1e-12;
    double worst = 0.0;
    for (int i = 1; i < 40; ++i) {
        const double th0 = num::kPi / 2 * i / 40.0;
        const SectorGeometry g(num::kPi / 2 - th0, 0.5 * std::tan(num::kPi / 2 - th0));
        for (int j = 0; j <= 40; ++j) {
            const double k = g.max_slope() * (-0.999 + 1.998 * j / 40.0);
            const LawPair laws = constant_pair(k);
            const double expect = std::tan(th0 + std::atan(k));
            for (const auto& ch : {ChartId::omega(), ChartId::v(), ChartId::w(1.0), ChartId::r()}) {
                const double q = ch.kind == ChartKind::r ? 0.7 : 0.3;
                const double s = 0.2;
                for (int side : {1, 2}) {
                    double h = boundary_transfer(ch, side, s, q, laws, g);
                    if (ch.kind == ChartKind::r) h /= q;
                    worst = std::max(worst, std::abs(h - expect) / (1.0 + std::abs(expect)));
                }
            }
        }
    }
    r.measured = {{"max_defect", worst}};
    r.pass = worst < r.threshold;
    return r;
}

CheckResult periodicity_check(const RunConfig& c) {
    CheckResult r;
    r.name = "transfer_periodicity";
    r.claim = "G_i and tilde g_i are log b-periodic in s";
    r.threshold = 1e-10;
    const double b = c.orbit.b;
    PeriodicShape up, down;
    up.mean = 0.2;
    up.modes = {{0.05, 1, 0, 0.0}, {0.02, 1, 1, 0.3}};
    down.mean = -0.2;
    down.modes = {{0.05, 1, 0, 0.0}, {0.02, 1, 1, 0.3}};
    const auto& g = c.geometry;
    std::vector<std::pair<ChartId, LawPair>> cases{
        {ChartId::v(), {make_discrete_similar_law(up, b, 1, LawKind::expanding, g),
                        make_discrete_similar_law(up, b, 2, LawKind::expanding, g)}},
        {ChartId::w(1.0), {make_discrete_similar_law(down, b, 1, LawKind::shrinking, g, 1.0),
                           make_discrete_similar_law(down, b, 2, LawKind::shrinking, g, 1.0)}}};
    if (c.laws.left.kind() == LawKind::expanding) cases.push_back({ChartId::v(), c.laws});
    if (c.laws.left.kind() == LawKind::shrinking) cases.push_back({ChartId::w(c.laws.left.horizon()), c.laws});
    double worst = 0.0;
    const double L = std::log(b);
    for (const auto& [ch, laws] : cases) {
        for (int i = 0; i <= 60; ++i) {
            const double s = -3.0 + 6.0 * i / 60.0;
            for (int j = 0; j <= 20; ++j) {
                const double q = -2.0 + 4.0 * j / 20.0;
                for (int side : {1, 2}) {
                    const double a0 = boundary_transfer(ch, side, s, q, laws, g);
                    const double a1 = boundary_transfer(ch, side, s + L, q, laws, g);
                    worst = std::max(worst, std::abs(a1 - a0));
                }
            }
        }
    }
    r.measured = {{"max_defect", worst}};
    r.pass = worst < r.threshold;
    return r;
}

CheckResult cross_chart_check(const RunConfig& c, const Scenario& sc, const EvolutionOptions& opt) {
    CheckResult r;
    r.name = "cross_chart";
    r.claim = "v- and r-chart runs agree to O(h^2 + ds)";
    const double t0 = c.evolution.start_time;
    const std::vector<double> times{1.25 * t0, 1.5 * t0, 2.0 * t0};
    auto distance = [&](std::size_t n) {
        RunConfig cc = c;
        cc.grid_points = n;
        const Problem pb{c.geometry, c.diffusivity, sc.laws};
        auto sv = init_state(ChartId::v(), sc.datum, c.geometry, n, t0);
        auto sr = init_state(ChartId::r(), sc.datum, c.geometry, n, t0);
        EvolveRequest qv, qr;
        for (double t : times) {
            qv.sample_s.push_back(chart_s(ChartId::v(), t));
            qr.sample_s.push_back(t);
        }
        qv.s_end = qv.sample_s.back();
        qr.s_end = qr.sample_s.back();
        const auto tv = evolve(std::move(sv), pb, qv, opt);
        const auto tr = evolve(std::move(sr), pb, qr, opt);
        double d = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto a = tv.recover(k), b = tr.recover(k);
            const double scale = *std::max_element(a.u_nodes.begin(), a.u_nodes.end());
            d = std::max(d, graph_distance(a, b) / scale);
        }
        return d;
    };
    const std::size_t n = c.grid_points;
    const std::size_t coarse = (n - 1) / 2 + 1;
    const double fine_d = distance(n);
    const double coarse_d = distance(coarse % 2 == 1 ? coarse : coarse + 1);
    const double h = 2 * c.geometry.theta0() / (n - 1);
    // constant absorbs the solution's derivatives; time error is controlled
    // by the step tolerance
    r.threshold = 10.0 * (h * h + std::sqrt(opt.step_tol));
    r.measured = {{"distance", fine_d}, {"distance_coarse", coarse_d}, {"h", h}};
    r.pass = fine_d < r.threshold && fine_d <= coarse_d;
    return r;
}

}  // namespace

std::vector<CheckResult> run_suite(const RunConfig& config) {
    std::vector<std::string> selected;
    const std::string& selection = config.verify_checks;
    if (selection == "all") {
        selected = suite_check_names();
    } else if (selection != "none" && !selection.empty()) {
        std::stringstream ss(selection);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto names = suite_check_names();
            if (std::find(names.begin(), names.end(), item) == names.end())
                throw ConfigError("unknown check '" + item + "' in verify.checks");
            selected.push_back(item);
        }
    }
    auto wanted = [&](const std::string& n) {
        return std::find(selected.begin(), selected.end(), n) != selected.end();
    };
    struct Pending {
        std::string name;
        std::future<std::vector<CheckResult>> result;
    };
    std::vector<Pending> pending;
    auto guarded = [&](const std::string& name, std::function<std::vector<CheckResult>()> body) {
        if (!wanted(name)) return;
        pending.push_back({name, std::async(std::launch::async, std::move(body))});
    };
    const auto& c = config;
    const auto opt = EvolutionOptions::from(c);
    const double span = 4.0;

    guarded("law_validation", [&] { return std::vector{law_check(c)}; });
    guarded("profiles", [&] { return std::vector{profile_check(c)}; });
    guarded("chart_round_trip", [&] { return std::vector{round_trip_check(c)}; });
    guarded("tan_addition", [&] { return std::vector{tan_addition_check(c)}; });
    guarded("transfer_periodicity", [&] { return std::vector{periodicity_check(c)}; });

    guarded("gradient_bound", [&] {
        const auto up = expanding_scenario(c);
        const auto down = shrinking_scenario(c);
        auto a = check_gradient_bound(run(c, ChartId::v(), up.laws, up.datum, c.evolution.start_time,
                                          span, 41, opt),
                                      c.geometry);
        a.name = "gradient_bound_expanding";
        const Problem pb{c.geometry, c.diffusivity, down.laws};
        // stop short of extinction, where the recovered graph is unresolved
        const double T = measure_extinction(pb, down.datum, OrbitSearch::from(c));
        auto b = check_gradient_bound(run(c, ChartId::r(), down.laws, down.datum, 0.0, 0.95 * T, 41, opt),
                                      c.geometry);
        b.name = "gradient_bound_shrinking";
        return std::vector{a, b};
    });

    guarded("comparison", [&] {
        const auto up = expanding_scenario(c);
        auto ex = opt;
        ex.rule = TimeRule::explicit_cfl;
        ex.adaptive = false;
        ex.cfl = 0.9;
        const auto high = dilate_datum(up.datum, 1.1, up.laws, c.evolution.start_time);
        const auto lo = run(c, ChartId::v(), up.laws, up.datum, c.evolution.start_time, 1.0, 21, ex);
        const auto hi = run(c, ChartId::v(), up.laws, high, c.evolution.start_time, 1.0, 21, ex);
        return std::vector{check_comparison(lo, hi)};
    });

    guarded("sandwich", [&] {
        const auto up = expanding_scenario(c);
        ProfileOptions po;
        po.shoot_tol = c.tol.shoot;
        const auto pm = solve_phi(c.diffusivity, up.laws.left.min_value(), up.laws.right.min_value(),
                                  c.geometry, po);
        const auto pp = solve_phi(c.diffusivity, up.laws.left.max_value(), up.laws.right.max_value(),
                                  c.geometry, po);
        const auto sw = sandwich_parameters(up.datum, pm, pp);
        const double t0 = c.evolution.start_time;
        const auto tr = run(c, ChartId::v(), up.laws, up.datum, t0, span, 21, opt);
        double worst = INFINITY;
        for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
            const auto rec = tr.recover(k);
            const double t = tr.snapshots[k].t - t0;
            const double scale = *std::max_element(rec.u_nodes.begin(), rec.u_nodes.end());
            for (std::size_t j = 0; j < rec.x_nodes.size(); ++j) {
                const double x = rec.x_nodes[j];
                if (auto lo = classical_eval(pm, x, t, sw.lower)) worst = std::min(worst, (rec.u_nodes[j] - *lo) / scale);
                if (auto hi = classical_eval(pp, x, t, sw.upper)) worst = std::min(worst, (*hi - rec.u_nodes[j]) / scale);
            }
        }
        CheckResult r;
        r.name = "sandwich";
        r.claim = "classical lower and upper solutions enclose the flow";
        const double h = tr.theta[1] - tr.theta[0];
        r.threshold = 10.0 * h * h;
        r.measured = {{"t_minus", sw.lower}, {"t_plus", sw.upper}, {"min_relative_gap", worst}};
        r.pass = worst >= -r.threshold;
        return std::vector{r};
    });

    guarded("area_law", [&] {
        const auto up = expanding_scenario(c);
        const auto down = shrinking_scenario(c);
        auto a = check_area_law(run(c, ChartId::v(), up.laws, up.datum, c.evolution.start_time, 1.0, 21, opt),
                                c.diffusivity, up.laws, c.geometry);
        a.name = "area_law_expanding";
        const Problem pb{c.geometry, c.diffusivity, down.laws};
        const double T = measure_extinction(pb, down.datum, OrbitSearch::from(c));
        auto b = check_area_law(run(c, ChartId::r(), down.laws, down.datum, 0.0, 0.9 * T, 21, opt),
                                c.diffusivity, down.laws, c.geometry);
        b.name = "area_law_shrinking";
        return std::vector{a, b};
    });

    guarded("delta_ratio", [&] {
        const auto down = shrinking_scenario(c);
        ProfileOptions po;
        po.shoot_tol = c.tol.shoot;
        return std::vector{check_delta_ratio(measure_delta(down.datum, c.diffusivity, down.laws, c.geometry, po))};
    });

    guarded("monotone_time", [&] {
        const auto up = expanding_scenario(c);
        return std::vector{check_monotone_time(
            run(c, ChartId::v(), up.laws, up.datum, c.evolution.start_time, span, 41, opt), true)};
    });

    guarded("cross_chart", [&] { return std::vector{cross_chart_check(c, expanding_scenario(c), opt)}; });

    guarded("expanding_orbit", [&] {
        const auto up = expanding_scenario(c);
        const Problem pb{c.geometry, c.diffusivity, up.laws};
        const auto orbit = find_expanding_orbit(pb, up.datum, OrbitSearch::from(c));
        const auto sim = similarity_residual(orbit);
        CheckResult r;
        r.name = "expanding_orbit";
        r.claim = "log b-periodic orbit with the discrete similarity of U and the endpoints";
        r.threshold = c.tol.orbit;
        const bool constant = up.laws.left.kind() == LawKind::constant && up.laws.right.kind() == LawKind::constant;
        r.measured = {{"periodicity_defect", orbit.periodicity_defect},
                      {"similarity_residual", sim.residual},
                      {"endpoint_defect", sim.endpoint_defect},
                      {"oscillation", orbit.oscillation}};
        r.pass = orbit.converged && orbit.periodicity_defect < c.tol.orbit && sim.residual < 1e-2 &&
                 sim.endpoint_defect < 1e-2 && (!constant || orbit.oscillation < 1e-3);
        return std::vector{r};
    });

    guarded("shrinking_orbit", [&] {
        const auto down = shrinking_scenario(c);
        const Problem pb{c.geometry, c.diffusivity, down.laws};
        const auto search = OrbitSearch::from(c);
        const double T = down.laws.left.kind() == LawKind::shrinking ? down.laws.left.horizon()
                                                                      : c.evolution.horizon;
        const auto target = target_extinction(T, pb, down.datum, search);
        const auto orbit = find_shrinking_orbit(pb, target.datum, T, search, true);
        const auto sim = similarity_residual(orbit);
        ProfileOptions po;
        po.shoot_tol = c.tol.shoot;
        const auto dm = measure_delta(target.datum, c.diffusivity, down.laws, c.geometry, po);
        const auto win = w_window(dm, c.geometry);
        double wmin = INFINITY, wmax = -INFINITY;
        for (const auto& snap : orbit.history) {
            for (double w : snap.values) {
                wmin = std::min(wmin, w);
                wmax = std::max(wmax, w);
            }
        }
        CheckResult r;
        r.name = "shrinking_orbit";
        r.claim = "log b-periodic w orbit, discrete similarity, w inside its a priori window";
        r.threshold = c.tol.orbit;
        r.measured = {{"periodicity_defect", orbit.periodicity_defect},
                      {"similarity_residual", sim.residual},
                      {"endpoint_defect", sim.endpoint_defect},
                      {"w_min", wmin},
                      {"w_max", wmax},
                      {"window_lower", win.lower},
                      {"window_upper", win.upper},
                      {"extinction_time", target.extinction_time}};
        r.pass = orbit.converged && orbit.periodicity_defect < c.tol.orbit && sim.residual < 1e-2 &&
                 sim.endpoint_defect < 1e-2 && wmin >= win.lower && wmax <= win.upper;
        return std::vector{r};
    });

    std::vector<CheckResult> results;
    for (auto& p : pending) {
        try {
            for (auto& r : p.result.get()) {
                if (r.name.empty()) r.name = p.name;
                results.push_back(std::move(r));
            }
        } catch (const std::exception& e) {
            CheckResult r;
            r.name = p.name;
            r.pass = false;
            r.note = e.what();
            results.push_back(std::move(r));
        }
    }
    return results;
}

std::vector<CheckResult> run_suite(const KeyValueConfig& config) {
    RunConfig rc;
    try {
        rc = RunConfig::from(config);
    } catch (const PreconditionError& e) {
        CheckResult r;
        r.name = "construction";
        r.claim = "configuration describes admissible geometry, diffusivity and laws";
        r.pass = false;
        r.note = e.what();
        return {r};
    }
    return run_suite(rc);
}

std::string report_json(const std::vector<CheckResult>& results, const std::string& config_hash) {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    nlohmann::json list = nlohmann::json::array();
    int failed = 0;
    for (const auto& r : results) {
        nlohmann::json o;
        o["name"] = r.name;
        o["claim"] = r.claim;
        o["threshold"] = r.threshold;
        o["pass"] = r.pass;
        o["skipped"] = r.skipped;
        o["note"] = r.note;
        o["artifacts"] = r.artifacts;
        nlohmann::json m = nlohmann::json::object();
        for (const auto& [k, v] : r.measured) m[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
        o["measured"] = m;
        list.push_back(o);
        if (!r.pass) ++failed;
    }
    j["checks"] = list;
    j["failed"] = failed;
    j["passed"] = static_cast<int>(results.size()) - failed;
    return j.dump(2) + "\n";
}

}  // namespace wedge
