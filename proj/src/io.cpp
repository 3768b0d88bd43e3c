#include "wedge/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wedge/config.hpp"
#include "wedge/error.hpp"

namespace wedge::io {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string hash_comment(const std::string& config_hash) { return "config_hash=" + config_hash; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (!std::filesystem::is_directory(path)) throw ConfigError("cannot create output directory '" + path + "'");
}

void write_csv(const std::string& path, const Table& table) {
    if (table.header.size() != table.columns.size()) throw PreconditionError("CSV header and columns differ");
    const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
    for (const auto& c : table.columns) {
        if (c.size() != rows) throw PreconditionError("CSV columns have different lengths");
    }
    std::string text;
    for (const auto& c : table.comments) text += "# " + c + "\n";
    for (std::size_t j = 0; j < table.header.size(); ++j) text += (j ? "," : "") + table.header[j];
    text += "\n";
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < table.columns.size(); ++j) text += (j ? "," : "") + num(table.columns[j][i]);
        text += "\n";
    }
    write_text(path, text);
}

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    Table t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            t.comments.push_back(trim(s.substr(1)));
            continue;
        }
        const auto cells = split(s);
        if (t.header.empty()) {
            t.header = cells;
            t.columns.assign(cells.size(), {});
            continue;
        }
        if (cells.size() != t.header.size())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                              " columns");
        for (std::size_t j = 0; j < cells.size(); ++j) {
            try {
                std::size_t used = 0;
                t.columns[j].push_back(std::stod(cells[j], &used));
                if (used != cells[j].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number '" + cells[j] + "'");
            }
        }
    }
    if (t.header.empty()) throw ConfigError("'" + path + "' has no header row");
    return t;
}

void write_datum_csv(const std::string& path, const InitialDatum& datum, const std::string& config_hash) {
    write_csv(path, {{hash_comment(config_hash)}, {"x", "u0"}, {datum.x(), datum.u()}});
}

InitialDatum read_datum_csv(const std::string& path) {
    const Table t = read_csv(path);
    if (t.header.size() < 2 || t.header[0] != "x" || t.header[1] != "u0")
        throw ConfigError("'" + path + "' must have columns x,u0");
    const auto& x = t.columns[0];
    const auto& u = t.columns[1];
    const std::size_t n = x.size();
    if (n < 5) throw ConfigError("'" + path + "' needs at least 5 rows");
    const double h = (x.back() - x.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)) + 1e-12)
            throw ConfigError("'" + path + "' must be sampled on a uniform x grid");
    }
    std::vector<double> ux(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n) {
            ux[i] = (u[i - 2] - 8 * u[i - 1] + 8 * u[i + 1] - u[i + 2]) / (12 * h);
        } else if (i < 2) {
            // one-sided five-point stencils
            const std::size_t k = i;
            const double* v = &u[0];
            ux[i] = k == 0 ? (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
                           : (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h);
        } else {
            const double* v = &u[n - 5];
            ux[i] = i == n - 1 ? (3 * v[0] - 16 * v[1] + 36 * v[2] - 48 * v[3] + 25 * v[4]) / (12 * h)
                               : (-v[0] + 6 * v[1] - 18 * v[2] + 10 * v[3] + 3 * v[4]) / (12 * h);
        }
    }
    return InitialDatum(-x.front(), x.back(), u, ux);
}

void write_profile_csv(const std::string& path, const Profile& p, const std::string& config_hash) {
    Table t;
    t.comments = {hash_comment(config_hash),
                  "kind=" + to_string(p.kind),
                  "gamma1=" + num(p.gamma1),
                  "gamma2=" + num(p.gamma2),
                  "left=" + num(p.left),
                  "right=" + num(p.right),
                  "value0=" + num(p.value0),
                  "slope0=" + num(p.slope0),
                  "shooting_residual=" + num(p.residual),
                  "ode_residual=" + num(p.ode_residual()),
                  "solutions_found=" + std::to_string(p.alternatives.size())};
    t.header = {"z", "value", "slope"};
    t.columns = {p.z, p.value, p.slope};
    write_csv(path, t);
}

std::vector<std::string> write_trajectory(const std::string& dir, const std::string& stem, const Trajectory& tr,
                                          const std::string& config_hash) {
    ensure_directory(dir);
    std::vector<std::string> files;
    nlohmann::json samples = nlohmann::json::array();
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
        const auto& snap = tr.snapshots[k];
        const auto rec = tr.recover(k);
        char name[64];
        std::snprintf(name, sizeof name, "_%04zu.csv", k);
        const std::string file = stem + name;
        Table t;
        t.comments = {hash_comment(config_hash), "chart=" + tr.chart.name(), "s=" + num(snap.s), "t=" + num(snap.t)};
        t.header = {"theta", "unknown", "x", "u"};
        t.columns = {tr.theta, snap.values, rec.x_nodes, rec.u_nodes};
        write_csv(dir + "/" + file, t);
        files.push_back(file);
        nlohmann::json o;
        o["file"] = file;
        o["s"] = snap.s;
        o["t"] = snap.t;
        o["xi1"] = rec.xi1;
        o["xi2"] = rec.xi2;
        o["max_u"] = *std::max_element(rec.u_nodes.begin(), rec.u_nodes.end());
        samples.push_back(o);
    }
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["chart"] = tr.chart.name();
    j["grid_points"] = tr.theta.size();
    j["steps"] = tr.steps;
    j["rejected_steps"] = tr.rejected;
    j["extinct"] = tr.extinct;
    j["extinction_time"] = finite_or_null(tr.extinction_time);
    j["min_denominator"] = finite_or_null(tr.diagnostics.min_denominator);
    j["max_abs_q_theta"] = finite_or_null(tr.diagnostics.max_abs_q_theta);
    j["samples"] = samples;
    write_text(dir + "/" + stem + ".json", j.dump(2) + "\n");
    files.push_back(stem + ".json");
    return files;
}

void write_orbit(const std::string& dir, const std::string& stem, const SelfsimilarOrbit& orbit,
                 const SimilarityReport& sim, const std::string& config_hash) {
    ensure_directory(dir);
    Table t;
    t.comments = {hash_comment(config_hash), "chart=" + orbit.chart.name(), "b=" + num(orbit.b),
                  "nodes_per_period=" + std::to_string(orbit.nodes_per_period)};
    t.header = {"theta", "s", "P"};
    t.columns.assign(3, {});
    const int M = orbit.nodes_per_period;
    if (!orbit.window.empty()) {
        for (int k = M; k <= 2 * M; ++k) {
            const auto& v = orbit.window[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < orbit.theta.size(); ++i) {
                t.columns[0].push_back(orbit.theta[i]);
                t.columns[1].push_back(orbit.s_nodes[static_cast<std::size_t>(k)]);
                t.columns[2].push_back(v[i]);
            }
        }
    }
    write_csv(dir + "/" + stem + ".csv", t);

    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["kind"] = to_string(orbit.kind);
    j["chart"] = orbit.chart.name();
    j["b"] = orbit.b;
    j["horizon"] = orbit.horizon;
    j["converged"] = orbit.converged;
    j["periodicity_defect"] = finite_or_null(orbit.periodicity_defect);
    j["defect_trace"] = orbit.defect_trace;
    j["oscillation"] = orbit.oscillation;
    j["lambda"] = orbit.lambda;
    j["bisections"] = orbit.bisections;
    j["similarity_residual"] = finite_or_null(sim.residual);
    j["similarity_residual_relative"] = finite_or_null(sim.residual_relative);
    j["endpoint_defect"] = finite_or_null(sim.endpoint_defect);
    j["similarity_samples"] = sim.samples;
    if (!orbit.window.empty()) {
        const auto rec = orbit.recover(orbit.s_nodes[static_cast<std::size_t>(M)]);
        j["xi1"] = rec.xi1;
        j["xi2"] = rec.xi2;
        write_csv(dir + "/" + stem + "_graph.csv",
                  {{hash_comment(config_hash), "s=" + num(orbit.s_nodes[static_cast<std::size_t>(M)])},
                   {"x", "u"},
                   {rec.x_nodes, rec.u_nodes}});
    }
    write_text(dir + "/" + stem + ".json", j.dump(2) + "\n");
}

}  // namespace wedge::io
