#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "wedge/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Free-boundary curvature-type flows in a wedge: profiles, evolution, selfsimilar orbits"};
    app.require_subcommand(1, 1);
    const std::map<std::string, std::string> about{
        {"profile", "solve the classical phi/psi profile for laws.1.gamma, laws.2.gamma"},
        {"evolve", "integrate the flow in one chart and write snapshots"},
        {"expand", "find the periodic orbit of an expanding run"},
        {"shrink", "match the extinction time, then find the shrinking orbit"},
        {"ancient", "compare shrinking orbits across growing horizons"},
        {"target-extinction", "dilate the datum until it extinguishes at the horizon T"},
        {"verify", "run the invariant suite and write report.json"},
    };
    wedge::Command cmd;
    for (const auto& verb : wedge::command_verbs()) {
        const auto it = about.find(verb);
        auto* sub = app.add_subcommand(verb, it == about.end() ? std::string() : it->second);
        sub->add_option("--config", cmd.config_path, "key = value config file")->check(CLI::ExistingFile);
        sub->add_option("--out", cmd.out_dir, "output directory")->capture_default_str();
        sub->add_option("--set", cmd.overrides, "override key=value (repeatable)")->take_all();
        sub->add_flag("--quiet", cmd.quiet, "suppress progress output");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cmd.verb = app.get_subcommands().front()->get_name();
    return wedge::dispatch(cmd, std::cerr);
}
