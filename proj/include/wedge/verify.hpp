#pragma once

#include <string>
#include <vector>

#include "wedge/config.hpp"
#include "wedge/evolution.hpp"
#include "wedge/profile.hpp"
#include "wedge/sandwich.hpp"

namespace wedge {

struct CheckResult {
    std::string name;
    std::string claim;
    std::vector<std::pair<std::string, double>> measured;
    double threshold = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string note;
    std::vector<std::string> artifacts;

    double value(const std::string& key) const;
};

/// max |u_x| over every snapshot against tan(beta) - sigma + 5 h^2.
CheckResult check_gradient_bound(const Trajectory& trajectory, const SectorGeometry& geometry);

/// Ordering of two runs. Graphs in the sector are ordered exactly when their
/// polar radii are ordered at every theta, so the radii are compared.
CheckResult check_comparison(const Trajectory& low, const Trajectory& high, double slack = 1e-8);

/// Least-squares slope of D(t) = int u dx - (xi1^2 + xi2^2) tan(beta) / 2
/// against int_{-gamma1}^{gamma2} a(p) dp (constant laws only).
CheckResult check_area_law(const Trajectory& trajectory, const Diffusivity& a, const LawPair& laws,
                           const SectorGeometry& geometry, double rel_tol = 0.01);

/// delta = sigma^4 / (2 tan(beta) - sigma)^4 * (q2+ / q2-)^2.
double delta_ratio(const SectorGeometry& geometry, double q2_plus, double q2_minus);

struct DeltaMeasurement {
    double delta = 0.0;
    double T_minus = 0.0, T_plus = 0.0;
    double q2_minus = 0.0, q2_plus = 0.0;
    Profile psi_minus, psi_plus;
};

/// psi- from (k0_1, k0_2) and psi+ from (K0_1, K0_2), delta and (T-, T+).
DeltaMeasurement measure_delta(const InitialDatum& datum, const Diffusivity& a, const LawPair& laws,
                               const SectorGeometry& geometry, const ProfileOptions& options = {});

CheckResult check_delta_ratio(const DeltaMeasurement& m);

/// Bounds on w: -log[(max psi+ / cos theta0) sqrt(2 delta1)] <= w
///                <= -log[min psi- sqrt(2 delta / (1 + delta))].
struct WWindow {
    double lower = 0.0, upper = 0.0;
};
WWindow w_window(const DeltaMeasurement& m, const SectorGeometry& geometry);

/// u(x, t) nondecreasing between consecutive snapshots (convex datum runs).
CheckResult check_monotone_time(const Trajectory& trajectory, bool convex_datum,
                                double rel_slack = 1e-6);

/// Runs the selected checks (verify.checks: "all", "none" or a comma list).
std::vector<CheckResult> run_suite(const RunConfig& config);
/// As above, but a configuration whose objects cannot be constructed (for
/// example sigma >= tan(beta)) yields a single failed "construction" check
/// instead of an exception. Unknown keys and malformed values still throw
/// ConfigError.
std::vector<CheckResult> run_suite(const KeyValueConfig& config);

/// Names of the checks understood by run_suite.
std::vector<std::string> suite_check_names();

std::string report_json(const std::vector<CheckResult>& results, const std::string& config_hash);

}  // namespace wedge
