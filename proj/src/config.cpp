#include "wedge/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wedge/error.hpp"

namespace wedge {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool known_key(const std::string& key) { return default_config_values().count(key) != 0; }

}  // namespace

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

const std::map<std::string, std::string>& default_config_values() {
    static const std::map<std::string, std::string> defaults = [] {
        std::map<std::string, std::string> d{
            {"geometry.beta", "0.78539816339744828"},
            {"geometry.sigma", "0.5"},
            {"diffusivity.kind", "constant"},
            {"diffusivity.c", "1"},
            {"diffusivity.coefficients", "1"},
            {"diffusivity.table_p", ""},
            {"diffusivity.table_a", ""},
            {"grid.points", "201"},
            {"time.rule", "semi-implicit"},
            {"time.value", "0.001"},
            {"time.adaptive", "true"},
            {"time.step_tol", "1e-06"},
            {"time.ds_max", "0.05"},
            {"time.max_steps", "2000000"},
            {"tol.steady", "1e-08"},
            {"tol.orbit", "0.001"},
            {"tol.shoot", "1e-10"},
            {"tol.extinction", "0.01"},
            {"evolution.chart", "v"},
            {"evolution.n", "inf"},
            {"evolution.horizon", "1"},
            {"evolution.start_time", "1"},
            {"evolution.s_end", "8"},
            {"evolution.samples", "50"},
            {"datum.kind", "convex"},
            {"datum.epsilon", "0.05"},
            {"datum.path", ""},
            {"datum.scale", "1"},
            {"orbit.b", "2"},
            {"orbit.nodes", "64"},
            {"orbit.periods", "3"},
            {"orbit.max_periods", "60"},
            {"extinction.radius", "0.001"},
            {"ancient.horizons", "1 4 16"},
            {"verify.checks", "all"},
            {"profile.samples", "2001"},
            {"profile.z_max", "50"},
            {"seed", "12345"},
        };
        for (const char* side : {"1", "2"}) {
            const std::string p = std::string("laws.") + side + ".";
            d[p + "kind"] = "constant";
            d[p + "gamma"] = "0.2";
            d[p + "mean"] = "0.2";
            d[p + "modes"] = "";
            d[p + "b"] = "2";
            d[p + "T"] = "1";
            d[p + "clamp_floor"] = "1e-12";
        }
        return d;
    }();
    return defaults;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
    KeyValueConfig kv;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(number) + ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
        kv.set(key, trim(t.substr(eq + 1)));
    }
    return kv;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    if (!known_key(key)) throw ConfigError("unknown config key '" + key + "'");
    values_[key] = value;
}

void KeyValueConfig::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& s = it->second;
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + s + "' is not a number");
    }
}

long KeyValueConfig::get_int(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long v = std::stol(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + it->second + "' is not an integer");
    }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError("key '" + key + "': '" + it->second + "' is not a boolean");
}

std::vector<double> KeyValueConfig::get_list(const std::string& key,
                                             const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::istringstream in(it->second);
    std::string tok;
    while (in >> tok) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': '" + tok + "' is not a number");
        }
    }
    return out;
}

std::string KeyValueConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

std::string KeyValueConfig::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : serialize()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

PeriodicShape parse_shape(const KeyValueConfig& kv, const std::string& prefix) {
    PeriodicShape shape;
    shape.mean = kv.get_double(prefix + "mean", 0.2);
    const std::string modes = kv.get_string(prefix + "modes", "");
    std::istringstream all(modes);
    std::string chunk;
    while (std::getline(all, chunk, ';')) {
        if (trim(chunk).empty()) continue;
        std::istringstream in(chunk);
        PeriodicShape::Mode m;
        if (!(in >> m.amplitude >> m.zeta_freq >> m.tau_freq)) {
            throw ConfigError(prefix + "modes: each mode is 'amplitude zeta_freq tau_freq [phase]'");
        }
        if (!(in >> m.phase)) m.phase = 0.0;
        shape.modes.push_back(m);
    }
    return shape;
}

}  // namespace

BoundaryLaw law_from_config(const KeyValueConfig& kv, int side, const SectorGeometry& geometry) {
    const std::string p = "laws." + std::to_string(side) + ".";
    const LawKind kind = law_kind_from_string(kv.get_string(p + "kind", "constant"));
    if (kind == LawKind::constant) {
        PeriodicShape shape;
        shape.mean = kv.get_double(p + "gamma", 0.2);
        return make_discrete_similar_law(shape, 2.0, side, LawKind::expanding, geometry, 0.0,
                                         kv.get_double(p + "clamp_floor", 1e-12));
    }
    const auto shape = parse_shape(kv, p);
    return make_discrete_similar_law(shape, kv.get_double(p + "b", 2.0), side, kind, geometry,
                                     kv.get_double(p + "T", 1.0),
                                     kv.get_double(p + "clamp_floor", 1e-12));
}

RunConfig RunConfig::from(const KeyValueConfig& kv) {
    RunConfig c;
    c.raw = kv;
    const auto& d = default_config_values();
    auto dbl = [&](const std::string& k) { return kv.get_double(k, std::stod(d.at(k))); };
    auto str = [&](const std::string& k) { return kv.get_string(k, d.at(k)); };
    auto integer = [&](const std::string& k) { return kv.get_int(k, std::stol(d.at(k))); };

    c.geometry = SectorGeometry(dbl("geometry.beta"), dbl("geometry.sigma"));

    const std::string family = str("diffusivity.kind");
    if (family == "constant") {
        c.diffusivity = Diffusivity::constant(dbl("diffusivity.c"));
    } else if (family == "curvature") {
        c.diffusivity = Diffusivity::curvature();
    } else if (family == "polynomial") {
        c.diffusivity = Diffusivity::polynomial(kv.get_list("diffusivity.coefficients", {1.0}));
    } else if (family == "tabulated") {
        c.diffusivity = Diffusivity::tabulated(kv.get_list("diffusivity.table_p", {}),
                                               kv.get_list("diffusivity.table_a", {}));
    } else {
        throw ConfigError("diffusivity.kind must be constant, curvature, polynomial or tabulated");
    }
    c.diffusivity.require_positive(c.geometry);

    c.laws = LawPair{law_from_config(kv, 1, c.geometry), law_from_config(kv, 2, c.geometry)};

    const long n = integer("grid.points");
    if (n < 21 || n % 2 == 0) throw ConfigError("grid.points must be odd and at least 21");
    c.grid_points = static_cast<std::size_t>(n);

    const std::string rule = str("time.rule");
    if (rule == "semi-implicit") {
        c.time_rule = TimeRule::semi_implicit;
    } else if (rule == "explicit") {
        c.time_rule = TimeRule::explicit_cfl;
    } else {
        throw ConfigError("time.rule must be semi-implicit or explicit");
    }
    c.time_value = dbl("time.value");
    c.adaptive = kv.get_bool("time.adaptive", true);
    c.step_tol = dbl("time.step_tol");
    c.ds_max = dbl("time.ds_max");
    c.max_steps = integer("time.max_steps");

    c.tol.steady = dbl("tol.steady");
    c.tol.orbit = dbl("tol.orbit");
    c.tol.shoot = dbl("tol.shoot");
    c.tol.extinction = dbl("tol.extinction");
    for (double t : {c.tol.steady, c.tol.orbit, c.tol.shoot, c.tol.extinction, c.time_value,
                     c.step_tol, c.ds_max}) {
        if (!(t > 0.0)) throw ConfigError("tolerances and step parameters must be positive");
    }

    c.evolution.chart = str("evolution.chart");
    if (c.evolution.chart != "omega" && c.evolution.chart != "v" && c.evolution.chart != "w" &&
        c.evolution.chart != "r") {
        throw ConfigError("evolution.chart must be omega, v, w or r");
    }
    c.evolution.n = dbl("evolution.n");
    c.evolution.horizon = dbl("evolution.horizon");
    c.evolution.start_time = dbl("evolution.start_time");
    c.evolution.s_end = dbl("evolution.s_end");
    c.evolution.samples = static_cast<int>(integer("evolution.samples"));
    if (c.evolution.samples < 2) throw ConfigError("evolution.samples must be at least 2");

    c.datum.kind = str("datum.kind");
    if (c.datum.kind != "convex" && c.datum.kind != "classical" && c.datum.kind != "dome" &&
        c.datum.kind != "file") {
        throw ConfigError("datum.kind must be convex, classical, dome or file");
    }
    c.datum.epsilon = dbl("datum.epsilon");
    c.datum.path = str("datum.path");
    c.datum.scale = dbl("datum.scale");

    c.orbit.b = dbl("orbit.b");
    c.orbit.nodes = static_cast<int>(integer("orbit.nodes"));
    c.orbit.periods = static_cast<int>(integer("orbit.periods"));
    c.orbit.max_periods = static_cast<int>(integer("orbit.max_periods"));
    if (!(c.orbit.b > 1.0) || c.orbit.nodes < 4 || c.orbit.periods < 1)
        throw ConfigError("orbit settings: need b > 1, nodes >= 4, periods >= 1");

    c.extinction_radius = dbl("extinction.radius");
    c.ancient_horizons = kv.get_list("ancient.horizons", {1.0, 4.0, 16.0});
    c.verify_checks = str("verify.checks");
    c.profile_samples = static_cast<std::size_t>(integer("profile.samples"));
    c.profile_z_max = dbl("profile.z_max");
    c.seed = static_cast<unsigned long>(integer("seed"));
    return c;
}

}  // namespace wedge
