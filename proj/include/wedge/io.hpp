#pragma once

#include <string>
#include <vector>

#include "wedge/evolution.hpp"
#include "wedge/initial_datum.hpp"
#include "wedge/profile.hpp"
#include "wedge/selfsimilar.hpp"

namespace wedge::io {

/// Column-major table written as CSV: optional '#' comment lines, then a
/// header row, then one row per index. Doubles use %.17g.
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

void write_csv(const std::string& path, const Table& table);
/// Reads a CSV written by write_csv (or any header-first numeric CSV);
/// '#' lines are collected into comments. Throws ConfigError on I/O or
/// parse failure.
Table read_csv(const std::string& path);

void write_text(const std::string& path, const std::string& text);
/// Creates the directory (and parents) when missing; throws ConfigError
/// when it cannot be created or is not a directory.
void ensure_directory(const std::string& path);

std::string hash_comment(const std::string& config_hash);

/// Datum CSV with columns x,u0.
void write_datum_csv(const std::string& path, const InitialDatum& datum, const std::string& config_hash);
/// Reads x,u0 on a uniform grid; slopes come from fourth-order differences.
InitialDatum read_datum_csv(const std::string& path);

void write_profile_csv(const std::string& path, const Profile& profile, const std::string& config_hash);

/// One CSV per sample (theta, unknown, x, u) named <stem>_<index>.csv plus a
/// JSON summary <stem>.json. Returns the written file names.
std::vector<std::string> write_trajectory(const std::string& dir, const std::string& stem,
                                          const Trajectory& trajectory, const std::string& config_hash);

/// Final period of the orbit as long-format CSV (theta, s, P) plus a JSON
/// summary with the diagnostics.
void write_orbit(const std::string& dir, const std::string& stem, const SelfsimilarOrbit& orbit,
                 const SimilarityReport& similarity, const std::string& config_hash);

}  // namespace wedge::io
