#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "wedge/boundary_law.hpp"
#include "wedge/diffusivity.hpp"
#include "wedge/geometry.hpp"

namespace wedge {

/// Flat "key = value" text with dotted keys. Lines starting with '#' are
/// comments. Serialization is sorted by key, so parse(serialize()) is the
/// identity.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    /// Applies a "key=value" override.
    void apply_override(const std::string& assignment);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    std::string serialize() const;
    /// FNV-1a of the serialized text, as 16 hex digits.
    std::string hash() const;
    const std::map<std::string, std::string>& values() const { return values_; }

    bool operator==(const KeyValueConfig& other) const { return values_ == other.values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Every key understood by RunConfig, with its default.
const std::map<std::string, std::string>& default_config_values();

std::string format_double(double value);

enum class TimeRule { explicit_cfl, semi_implicit };

struct Tolerances {
    double steady = 1e-8;
    double orbit = 1e-3;
    double shoot = 1e-10;
    double extinction = 0.01;
};

struct EvolutionSettings {
    std::string chart = "v";
    double n = std::numeric_limits<double>::infinity();
    double horizon = 1.0;      // w chart T
    double start_time = 1.0;   // physical time of the datum in the limiting v chart
    double s_end = 8.0;
    int samples = 50;
};

struct DatumSettings {
    std::string kind = "convex";  // convex | classical | dome | file
    double epsilon = 0.05;
    std::string path;
    double scale = 1.0;
};

struct OrbitSettings {
    double b = 2.0;
    int nodes = 64;
    int periods = 3;
    int max_periods = 60;
};

struct RunConfig {
    KeyValueConfig raw;
    SectorGeometry geometry{0.78539816339744828, 0.5};
    Diffusivity diffusivity = Diffusivity::constant(1.0);
    LawPair laws{BoundaryLaw::constant(1, 0.2), BoundaryLaw::constant(2, 0.2)};
    std::size_t grid_points = 201;
    TimeRule time_rule = TimeRule::semi_implicit;
    double time_value = 1e-3;  // ds (semi-implicit) or CFL factor c (explicit)
    bool adaptive = true;
    double step_tol = 1e-6;
    double ds_max = 0.05;
    long max_steps = 2000000;
    Tolerances tol;
    EvolutionSettings evolution;
    DatumSettings datum;
    OrbitSettings orbit;
    double extinction_radius = 1e-3;
    std::vector<double> ancient_horizons{1.0, 4.0, 16.0};
    std::string verify_checks = "all";
    std::size_t profile_samples = 2001;
    double profile_z_max = 50.0;
    unsigned long seed = 12345;

    /// Builds and validates a run configuration (throws ConfigError or
    /// PreconditionError on invalid input).
    static RunConfig from(const KeyValueConfig& kv);
    static RunConfig defaults() { return from(KeyValueConfig{}); }
};

/// Parses one side's law from keys laws.<side>.*.
BoundaryLaw law_from_config(const KeyValueConfig& kv, int side, const SectorGeometry& geometry);

}  // namespace wedge
