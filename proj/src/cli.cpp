#include "wedge/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "wedge/error.hpp"
#include "wedge/evolution.hpp"
#include "wedge/io.hpp"
#include "wedge/profile.hpp"
#include "wedge/selfsimilar.hpp"
#include "wedge/verify.hpp"

namespace wedge {

const std::vector<std::string>& command_verbs() {
    static const std::vector<std::string> verbs{"profile", "evolve",           "expand", "shrink",
                                                "ancient", "target-extinction", "verify"};
    return verbs;
}

KeyValueConfig effective_config(const Command& command) {
    KeyValueConfig kv;
    for (const auto& [k, v] : default_config_values()) kv.set(k, v);
    if (!command.config_path.empty()) {
        const auto file = KeyValueConfig::load(command.config_path);
        for (const auto& [k, v] : file.values()) kv.set(k, v);
    }
    for (const auto& o : command.overrides) kv.apply_override(o);
    return kv;
}

namespace {

bool expanding(const LawPair& laws) { return laws.left.min_value() + laws.right.min_value() > 0.0; }
bool shrinking(const LawPair& laws) { return laws.left.max_value() + laws.right.max_value() < 0.0; }

ProfileOptions profile_options(const RunConfig& c) {
    ProfileOptions po;
    po.shoot_tol = c.tol.shoot;
    po.samples = c.profile_samples;
    po.z_max = c.profile_z_max;
    return po;
}

double horizon_of(const RunConfig& c) {
    if (c.laws.left.kind() == LawKind::shrinking) return c.laws.left.horizon();
    return c.evolution.horizon;
}

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

void write_json(const std::string& path, const nlohmann::json& j) { io::write_text(path, j.dump(2) + "\n"); }

int run_profile(const RunConfig& c, const std::string& out, const std::string& hash, std::ostream& log) {
    const double g1 = c.raw.get_double("laws.1.gamma", 0.2);
    const double g2 = c.raw.get_double("laws.2.gamma", 0.2);
    const Profile p = g1 + g2 >= 0.0 ? solve_phi(c.diffusivity, g1, g2, c.geometry, profile_options(c))
                                     : solve_psi(c.diffusivity, g1, g2, c.geometry, profile_options(c));
    io::write_profile_csv(out + "/profile.csv", p, hash);
    log << to_string(p.kind) << " profile: contacts (" << p.left << ", " << p.right << "), value(0) = " << p.value0
        << ", ode residual " << p.ode_residual() << "\n";
    return 0;
}

int run_evolve(const RunConfig& c, const std::string& out, const std::string& hash, std::ostream& log) {
    const ChartId chart = [&] {
        switch (chart_kind_from_string(c.evolution.chart)) {
            case ChartKind::omega: return ChartId::omega();
            case ChartKind::v: return ChartId::v(c.evolution.n);
            case ChartKind::w: return ChartId::w(c.evolution.horizon);
            case ChartKind::r: return ChartId::r();
        }
        return ChartId::v();
    }();
    const double t0 = chart.kind == ChartKind::v && std::isinf(chart.n) ? c.evolution.start_time : 0.0;
    const InitialDatum datum = datum_from_config(c, c.laws, t0);
    const Problem pb{c.geometry, c.diffusivity, c.laws};
    auto st = init_state(chart, datum, c.geometry, c.grid_points, t0);
    if (!(c.evolution.s_end > st.s))
        throw ConfigError("evolution.s_end must exceed the chart's initial s = " + format_double(st.s));
    EvolveRequest rq;
    rq.s_end = c.evolution.s_end;
    rq.sample_s = sample_times(st.s, rq.s_end, c.evolution.samples);
    rq.stop_on_extinction = chart.kind == ChartKind::r;
    rq.extinction_radius = c.extinction_radius;
    const auto tr = evolve(std::move(st), pb, rq, EvolutionOptions::from(c));
    io::write_trajectory(out, "trajectory", tr, hash);
    log << "evolved in the " << chart.name() << " chart: " << tr.snapshots.size() << " samples, " << tr.steps
        << " steps";
    if (tr.extinct) log << ", extinction at t = " << tr.extinction_time;
    log << "\n";
    return 0;
}

int run_expand(const RunConfig& c, const std::string& out, const std::string& hash, std::ostream& log) {
    if (!expanding(c.laws)) throw PreconditionError("expand needs min k1 + min k2 > 0");
    const Problem pb{c.geometry, c.diffusivity, c.laws};
    const auto orbit = find_expanding_orbit(pb, datum_from_config(c, c.laws, c.evolution.start_time),
                                            OrbitSearch::from(c));
    const auto sim = similarity_residual(orbit);
    io::write_orbit(out, "orbit", orbit, sim, hash);
    log << "expanding orbit: periodicity defect " << orbit.periodicity_defect << ", similarity residual "
        << sim.residual << ", oscillation " << orbit.oscillation << "\n";
    return orbit.converged ? 0 : 1;
}

int run_shrink(const RunConfig& c, const std::string& out, const std::string& hash, std::ostream& log) {
    if (!shrinking(c.laws)) throw PreconditionError("shrink needs max k1 + max k2 < 0");
    const Problem pb{c.geometry, c.diffusivity, c.laws};
    const auto search = OrbitSearch::from(c);
    const double T = horizon_of(c);
    const auto target = target_extinction(T, pb, datum_from_config(c, c.laws, 0.0), search);
    const auto orbit = find_shrinking_orbit(pb, target.datum, T, search);
    const auto sim = similarity_residual(orbit);
    io::write_orbit(out, "orbit", orbit, sim, hash);
    io::write_datum_csv(out + "/datum.csv", target.datum, hash);
    log << "shrinking orbit (T = " << T << "): periodicity defect " << orbit.periodicity_defect
        << ", similarity residual " << sim.residual << "\n";
    return orbit.converged ? 0 : 1;
}

int run_ancient(const RunConfig& c, const std::string& out, const std::string& hash, std::ostream& log) {
    const Problem pb{c.geometry, c.diffusivity, c.laws};
    const auto rep = ancient_limit(c.ancient_horizons, pb, datum_from_config(c, c.laws, 0.0), OrbitSearch::from(c));
    nlohmann::json j;
    j["config_hash"] = hash;
    j["horizons"] = rep.horizons;
    nlohmann::json d = nlohmann::json::array();
    for (double v : rep.distances) d.push_back(number(v));
    j["distances"] = d;
    j["decreasing"] = rep.decreasing;
    j["certified"] = rep.certified;
    j["final_distance"] = number(rep.final_distance);
    j["limit_similarity_residual"] = number(rep.limit_similarity.residual);
    nlohmann::json orbits = nlohmann::json::array();
    for (const auto& o : rep.orbits) {
        orbits.push_back({{"horizon", o.horizon},
                          {"lambda", o.lambda},
                          {"periodicity_defect", number(o.periodicity_defect)},
                          {"converged", o.converged}});
    }
    j["orbits"] = orbits;
    write_json(out + "/ancient.json", j);
    log << "ancient limit: distances";
    for (double v : rep.distances) log << " " << v;
    log << (rep.certified ? " (certified)" : " (not certified)") << "\n";
    return rep.decreasing ? 0 : 1;
}

int run_target(const RunConfig& c, const std::string& out, const std::string& hash, std::ostream& log) {
    if (!shrinking(c.laws)) throw PreconditionError("target-extinction needs max k1 + max k2 < 0");
    const Problem pb{c.geometry, c.diffusivity, c.laws};
    const double T = horizon_of(c);
    const auto r = target_extinction(T, pb, datum_from_config(c, c.laws, 0.0), OrbitSearch::from(c));
    io::write_datum_csv(out + "/datum.csv", r.datum, hash);
    nlohmann::json j;
    j["config_hash"] = hash;
    j["target"] = T;
    j["lambda"] = r.lambda;
    j["extinction_time"] = r.extinction_time;
    j["bisections"] = r.bisections;
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& [l, t] : r.evaluations) ev.push_back({{"lambda", l}, {"extinction_time", number(t)}});
    j["evaluations"] = ev;
    write_json(out + "/target.json", j);
    log << "extinction " << r.extinction_time << " for target " << T << " after " << r.bisections
        << " bisections\n";
    return 0;
}

int run_verify(const RunConfig& c, const std::string& out, const std::string& hash, std::ostream& log) {
    const auto results = run_suite(c);
    io::write_text(out + "/report.json", report_json(results, hash));
    int failed = 0;
    for (const auto& r : results) {
        log << (r.pass ? (r.skipped ? "SKIP " : "PASS ") : "FAIL ") << r.name;
        if (!r.note.empty()) log << "  (" << r.note << ")";
        log << "\n";
        if (!r.pass) ++failed;
    }
    log << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace

InitialDatum datum_from_config(const RunConfig& c, const LawPair& laws, double t) {
    const auto& d = c.datum;
    InitialDatum datum;
    if (d.kind == "convex") {
        datum = build_convex_datum(c.geometry, laws, c.diffusivity, d.epsilon, 2001, t).datum;
    } else if (d.kind == "dome") {
        datum = tangent_bezier_datum(c.geometry, laws, d.scale, d.scale, t);
    } else if (d.kind == "classical") {
        const double g1 = laws.left.min_value(), g2 = laws.right.min_value();
        if (expanding(laws)) {
            datum = classical_datum(solve_phi(c.diffusivity, g1, g2, c.geometry, profile_options(c)),
                                    t > 0.0 ? t : d.scale);
        } else {
            datum = classical_datum(solve_psi(c.diffusivity, laws.left.max_value(), laws.right.max_value(),
                                              c.geometry, profile_options(c)),
                                    horizon_of(c) - t);
        }
    } else if (d.kind == "file") {
        if (d.path.empty()) throw ConfigError("datum.kind = file needs datum.path");
        datum = io::read_datum_csv(d.path);
    } else {
        throw ConfigError("unknown datum.kind '" + d.kind + "'");
    }
    require_valid_datum(datum, c.geometry, laws, t, 1e-6);
    return datum;
}

int dispatch(const Command& command, std::ostream& log) {
    const auto& verbs = command_verbs();
    if (std::find(verbs.begin(), verbs.end(), command.verb) == verbs.end()) {
        log << "error: unknown command '" << command.verb << "'\n";
        return 2;
    }
    RunConfig config;
    std::string hash;
    try {
        const auto kv = effective_config(command);
        hash = kv.hash();
        io::ensure_directory(command.out_dir);
        try {
            config = RunConfig::from(kv);
        } catch (const PreconditionError&) {
            if (command.verb != "verify") throw;
            // inadmissible objects are reported as a failed suite
            const auto results = run_suite(kv);
            io::write_text(command.out_dir + "/report.json", report_json(results, hash));
            for (const auto& r : results) log << "FAIL " << r.name << "  (" << r.note << ")\n";
            return 1;
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
    std::ostringstream quiet_sink;
    std::ostream& out = command.quiet ? quiet_sink : log;
    try {
        io::write_text(command.out_dir + "/config.cfg", config.raw.serialize());
        const auto& v = command.verb;
        if (v == "profile") return run_profile(config, command.out_dir, hash, out);
        if (v == "evolve") return run_evolve(config, command.out_dir, hash, out);
        if (v == "expand") return run_expand(config, command.out_dir, hash, out);
        if (v == "shrink") return run_shrink(config, command.out_dir, hash, out);
        if (v == "ancient") return run_ancient(config, command.out_dir, hash, out);
        if (v == "target-extinction") return run_target(config, command.out_dir, hash, out);
        return run_verify(config, command.out_dir, hash, out);
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        const bool pre = dynamic_cast<const PreconditionError*>(&e) != nullptr;
        log << (pre ? "precondition violated: " : "numerical failure: ") << e.what() << "\n";
        nlohmann::json j;
        j["config_hash"] = hash;
        j["command"] = command.verb;
        j["error"] = e.what();
        try {
            write_json(command.out_dir + "/failure.json", j);
        } catch (...) {
        }
        return 1;
    }
}

}  // namespace wedge
