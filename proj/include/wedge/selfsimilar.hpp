#pragma once

#include <optional>
#include <vector>

#include "wedge/evolution.hpp"
#include "wedge/profile.hpp"

namespace wedge {

/// Settings shared by the orbit searches.
struct OrbitSearch {
    std::size_t grid_points = 201;
    double start_time = 1.0;  // physical time of the datum (expanding runs)
    OrbitSettings orbit;
    double orbit_tol = 1e-3;
    int shrinking_periods = 16;    // horizon of each extinction-time classification run
    int substeps_per_node = 4;     // fixed steps between orbit nodes in the w chart
    double extinction_radius = 1e-3;
    double extinction_tol = 0.01;
    EvolutionOptions evolution;

    static OrbitSearch from(const RunConfig& config);
};

/// A log b-periodic solution of the v problem (expanding) or w problem
/// (shrinking), stored on M nodes per period.
struct SelfsimilarOrbit {
    ProfileKind kind = ProfileKind::expanding;
    double b = 2.0;
    double horizon = 0.0;  // T (shrinking)
    ChartId chart;
    std::vector<double> theta;
    int nodes_per_period = 64;
    /// 2M + 1 raw samples spanning the previous and the final period.
    std::vector<double> s_nodes;
    std::vector<std::vector<double>> window;
    double periodicity_defect = 0.0;   // sup |P(s + log b) - P(s)| over the final period
    std::vector<double> defect_trace;  // one entry per completed period
    bool converged = false;
    double oscillation = 0.0;  // sup_theta (max_s P - min_s P) over the final period
    std::vector<Snapshot> history;  // every node sample of the run (when kept)
    double lambda = 1.0;            // dilation of the datum used (shrinking)
    int bisections = 0;

    double period() const;
    /// P(., s) for any s, by periodic cubic interpolation of the final period.
    std::vector<double> field(double s) const;
    /// Raw (unwrapped) samples interpolated inside the two-period window.
    std::vector<double> raw_field(double s) const;
    RecoveredSolution recover(double s, std::size_t points = 0) const;
    RecoveredSolution recover_raw(double s, std::size_t points = 0) const;
    /// U(x, t) from the periodic orbit; nullopt outside the free boundary.
    std::optional<double> value(double x, double t) const;
};

struct SimilarityReport {
    double residual = 0.0;           // sup |b U - U(b.)| / sup U
    double residual_relative = 0.0;  // sup |b U - U(b.)| / (1 + |U|)
    double endpoint_defect = 0.0;    // relative endpoint law defect
    int samples = 0;
    int skipped = 0;
};

/// Compares the previous period with the final one through the scaling
/// (x, t, u) -> (b x, b^2 t, b u) (expanding) or its shrinking analogue.
SimilarityReport similarity_residual(const SelfsimilarOrbit& orbit, int time_samples = 16,
                                     int space_samples = 101);

SelfsimilarOrbit find_expanding_orbit(const Problem& problem, const InitialDatum& datum,
                                      const OrbitSearch& search, bool keep_history = false);

/// The datum is dilated so the w-chart run neither extinguishes early nor
/// late (bisection on the dilation to machine precision), then the orbit is
/// extracted as in the expanding case.
SelfsimilarOrbit find_shrinking_orbit(const Problem& problem, const InitialDatum& datum, double T,
                                      const OrbitSearch& search, bool keep_history = false);

/// Extinction time of the r-chart run started from the datum at t = 0.
double measure_extinction(const Problem& problem, const InitialDatum& datum,
                          const OrbitSearch& search);

struct ExtinctionTarget {
    InitialDatum datum;
    double lambda = 1.0;
    double extinction_time = 0.0;
    int bisections = 0;
    std::vector<std::pair<double, double>> evaluations;  // (lambda, T_ext)
};

/// Dilates the reference datum until its r-chart extinction time is within
/// extinction_tol * T_target of T_target.
ExtinctionTarget target_extinction(double T_target, const Problem& problem,
                                   const InitialDatum& reference, const OrbitSearch& search,
                                   int max_bisections = 20);

struct AncientReport {
    std::vector<double> horizons;
    std::vector<double> distances;  // W(T_i) vs W(T_{i+1})
    bool decreasing = false;
    bool certified = false;
    double final_distance = 0.0;
    SimilarityReport limit_similarity;  // on the largest horizon
    std::vector<SelfsimilarOrbit> orbits;
};

/// W(x, that; T) = U_T(x, T + that) on that in [-1, -1/4] for each horizon,
/// taken from the T-matched w-chart trajectories. Laws must be autonomous
/// (constant laws included).
AncientReport ancient_limit(const std::vector<double>& horizons, const Problem& problem,
                            const InitialDatum& reference, const OrbitSearch& search);

/// Sup distance between two recovered graphs on their common support.
double graph_distance(const RecoveredSolution& a, const RecoveredSolution& b, std::size_t points = 201);

}  // namespace wedge
