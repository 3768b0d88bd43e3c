#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "wedge/chart.hpp"
#include "wedge/config.hpp"
#include "wedge/initial_datum.hpp"

namespace wedge {

struct EvolutionOptions {
    TimeRule rule = TimeRule::semi_implicit;
    double ds = 1e-3;       // initial (adaptive) or fixed step
    double cfl = 0.4;       // explicit: ds <= cfl h^2 / (2 max A)
    bool adaptive = true;
    double step_tol = 1e-6;
    double ds_min = 1e-14;
    double ds_max = 0.05;
    long max_steps = 2000000;
    double boundary_tol = 1e-12;
    int boundary_iters = 25;
    double denominator_floor = 0.0;

    static EvolutionOptions from(const RunConfig& config);
};

struct Diagnostics {
    double min_denominator = std::numeric_limits<double>::infinity();
    double max_abs_q_theta = 0.0;
};

struct EvolutionState {
    ChartId chart;
    std::vector<double> theta;
    std::vector<double> values;
    double s = 0.0;
    long step_count = 0;
    Diagnostics diagnostics;

    double h() const { return theta[1] - theta[0]; }
    double time() const { return chart_time(chart, s); }
    RecoveredSolution recover(std::size_t points = 0) const {
        return recover_solution(chart, theta, values, s, points);
    }
};

/// The data shared by every step of a run.
struct Problem {
    SectorGeometry geometry;
    Diffusivity a;
    LawPair laws;
};

/// Represents the datum (placed at physical time t0) on n theta nodes by
/// solving R cos(theta) = u0(R sin(theta)) for the polar radius R.
EvolutionState init_state(const ChartId& chart, const InitialDatum& datum,
                          const SectorGeometry& geometry, std::size_t n, double t0 = 0.0);

/// One step of size ds.
EvolutionState step(const EvolutionState& state, const Problem& problem, double ds,
                    const EvolutionOptions& options);

/// Largest explicit step allowed by the stability rule at this state.
double explicit_step_limit(const EvolutionState& state, const Problem& problem, double cfl);

struct Snapshot {
    double s = 0.0;
    double t = 0.0;
    std::vector<double> values;
};

struct Trajectory {
    ChartId chart;
    std::vector<double> theta;
    std::vector<Snapshot> snapshots;
    EvolutionState final_state;
    long steps = 0;
    long rejected = 0;
    bool extinct = false;
    double extinction_time = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<double, double>> min_radius_trace;  // (t, min r), r chart only
    Diagnostics diagnostics;

    RecoveredSolution recover(std::size_t index, std::size_t points = 0) const {
        return recover_solution(chart, theta, snapshots[index].values, snapshots[index].s, points);
    }
};

struct EvolveRequest {
    double s_end = 1.0;
    std::vector<double> sample_s;  // increasing; states are recorded exactly there
    bool stop_on_extinction = false;
    double extinction_radius = 1e-3;  // relative to the initial max radius
    bool keep_snapshots = true;
    /// Called at every sample; returning false stops the run.
    std::function<bool(const EvolutionState&)> on_sample;
};

Trajectory evolve(EvolutionState state, const Problem& problem, const EvolveRequest& request,
                  const EvolutionOptions& options);

/// Uniformly spaced sample times (count >= 2) on [s0, s1].
std::vector<double> sample_times(double s0, double s1, int count);

}  // namespace wedge
