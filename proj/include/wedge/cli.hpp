#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wedge/config.hpp"
#include "wedge/initial_datum.hpp"

namespace wedge {

struct Command {
    std::string verb;
    std::string config_path;  // empty: built-in defaults
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    bool quiet = false;
};

const std::vector<std::string>& command_verbs();

/// Defaults, then the config file, then the overrides. The result carries
/// every key, so its hash identifies the effective configuration.
KeyValueConfig effective_config(const Command& command);

/// Initial datum selected by datum.kind for the given laws. `t` is the
/// physical time at which it must be compatible with the laws.
InitialDatum datum_from_config(const RunConfig& config, const LawPair& laws, double t);

/// Runs the command. Exit status: 0 success, 1 numerical failure or failed
/// verification, 2 configuration or I/O error. Messages go to `log`.
int dispatch(const Command& command, std::ostream& log);

}  // namespace wedge
