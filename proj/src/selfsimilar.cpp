#include "wedge/selfsimilar.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "wedge/error.hpp"
#include "wedge/numerics.hpp"

namespace wedge {

OrbitSearch OrbitSearch::from(const RunConfig& config) {
    OrbitSearch s;
    s.grid_points = config.grid_points;
    s.start_time = config.evolution.start_time;
    s.orbit = config.orbit;
    s.orbit_tol = config.tol.orbit;
    s.extinction_radius = config.extinction_radius;
    s.extinction_tol = config.tol.extinction;
    s.evolution = EvolutionOptions::from(config);
    return s;
}

double SelfsimilarOrbit::period() const { return std::log(b); }

namespace {

std::vector<double> combine(const std::vector<std::vector<double>>& rows, const int idx[4],
                            const double w[4]) {
    std::vector<double> out(rows[static_cast<std::size_t>(idx[0])].size(), 0.0);
    for (int k = 0; k < 4; ++k) {
        const auto& r = rows[static_cast<std::size_t>(idx[k])];
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[k] * r[i];
    }
    return out;
}

}  // namespace

std::vector<double> SelfsimilarOrbit::field(double s) const {
    const int M = nodes_per_period;
    const double ds = period() / M;
    const double s_start = s_nodes[static_cast<std::size_t>(M)];  // final period [s_start, s_start + log b)
    const double pos = (s - s_start) / ds;
    const double fl = std::floor(pos);
    const double frac = pos - fl;
    const long base = static_cast<long>(fl);
    auto wrap = [M](long k) { return static_cast<int>(((k % M) + M) % M) + M; };
    const int idx[4] = {wrap(base - 1), wrap(base), wrap(base + 1), wrap(base + 2)};
    double w[4];
    num::cubic_lagrange_weights(frac, w);
    return combine(window, idx, w);
}

std::vector<double> SelfsimilarOrbit::raw_field(double s) const {
    const int last = static_cast<int>(s_nodes.size()) - 1;
    const double ds = (s_nodes.back() - s_nodes.front()) / last;
    const double pos = (s - s_nodes.front()) / ds;
    int base = std::clamp(static_cast<int>(std::floor(pos)), 1, last - 2);
    const double frac = pos - base;
    const int idx[4] = {base - 1, base, base + 1, base + 2};
    double w[4];
    num::cubic_lagrange_weights(frac, w);
    return combine(window, idx, w);
}

RecoveredSolution SelfsimilarOrbit::recover(double s, std::size_t points) const {
    return recover_solution(chart, theta, field(s), s, points);
}

RecoveredSolution SelfsimilarOrbit::recover_raw(double s, std::size_t points) const {
    return recover_solution(chart, theta, raw_field(s), s, points);
}

std::optional<double> SelfsimilarOrbit::value(double x, double t) const {
    const auto rec = recover(chart_s(chart, t));
    if (x < -rec.xi1 || x > rec.xi2) return std::nullopt;
    return rec.value(x);
}

SimilarityReport similarity_residual(const SelfsimilarOrbit& orbit, int time_samples,
                                     int space_samples) {
    SimilarityReport rep;
    const double L = orbit.period();
    const double b = orbit.b;
    const double s_begin = orbit.s_nodes.front();
    for (int j = 0; j < time_samples; ++j) {
        const double s = s_begin + L * (j + 0.37) / time_samples;
        const auto early = orbit.recover_raw(s);
        const auto late = orbit.recover_raw(s + L);
        // expanding: the later graph is the b-dilation of the earlier one;
        // shrinking: the earlier graph is the b-dilation of the later one.
        const auto& small = orbit.kind == ProfileKind::expanding ? early : late;
        const auto& big = orbit.kind == ProfileKind::expanding ? late : early;
        const double umax = *std::max_element(big.u_nodes.begin(), big.u_nodes.end());
        double worst = 0.0, worst_rel = 0.0;
        for (int i = 0; i < space_samples; ++i) {
            const double x = -small.xi1 + (small.xi1 + small.xi2) * i / (space_samples - 1.0);
            const double bx = b * x;
            if (bx < -big.xi1 || bx > big.xi2) {
                ++rep.skipped;
                continue;
            }
            const double target = big.value(bx);
            const double d = std::abs(b * small.value(x) - target);
            worst = std::max(worst, d / umax);
            worst_rel = std::max(worst_rel, d / (1.0 + std::abs(target)));
            ++rep.samples;
        }
        rep.residual = std::max(rep.residual, worst);
        rep.residual_relative = std::max(rep.residual_relative, worst_rel);
        rep.endpoint_defect = std::max({rep.endpoint_defect, std::abs(b * small.xi1 - big.xi1) / big.xi1,
                                        std::abs(b * small.xi2 - big.xi2) / big.xi2});
    }
    return rep;
}

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Streams node samples and watches the period-to-period defect.
class PeriodWatcher {
public:
    PeriodWatcher(int nodes, int periods, double tol, bool keep_history)
        : M_(nodes), periods_(periods), tol_(tol), keep_(keep_history) {}

    /// Returns false once the orbit has converged.
    bool push(const EvolutionState& st) {
        if (keep_) history_.push_back({st.s, st.time(), st.values});
        buffer_.push_back({st.s, st.values});
        if (buffer_.size() > static_cast<std::size_t>(2 * M_ + 1)) buffer_.pop_front();
        ++count_;
        if (count_ > M_) {
            const auto& now = buffer_.back().second;
            const auto& before = buffer_[buffer_.size() - 1 - static_cast<std::size_t>(M_)].second;
            period_max_ = std::max(period_max_, sup_diff(now, before));
        }
        if (count_ > M_ && (count_ - 1) % M_ == 0) {
            trace_.push_back(period_max_);
            streak_ = period_max_ < tol_ ? streak_ + 1 : 0;
            period_max_ = 0.0;
            if (streak_ >= periods_ && buffer_.size() == static_cast<std::size_t>(2 * M_ + 1)) {
                converged_ = true;
                return false;
            }
        }
        return true;
    }

    void fill(SelfsimilarOrbit& orbit) {
        orbit.nodes_per_period = M_;
        orbit.converged = converged_;
        orbit.defect_trace = trace_;
        orbit.periodicity_defect = trace_.empty() ? INFINITY : trace_.back();
        orbit.s_nodes.clear();
        orbit.window.clear();
        for (const auto& [s, v] : buffer_) {
            orbit.s_nodes.push_back(s);
            orbit.window.push_back(v);
        }
        orbit.history = std::move(history_);
        if (orbit.window.size() == static_cast<std::size_t>(2 * M_ + 1)) {
            const std::size_t n = orbit.theta.size();
            for (std::size_t i = 0; i < n; ++i) {
                double lo = INFINITY, hi = -INFINITY;
                for (int k = M_; k < 2 * M_; ++k) {
                    lo = std::min(lo, orbit.window[static_cast<std::size_t>(k)][i]);
                    hi = std::max(hi, orbit.window[static_cast<std::size_t>(k)][i]);
                }
                orbit.oscillation = std::max(orbit.oscillation, hi - lo);
            }
        }
    }

private:
    int M_, periods_;
    double tol_;
    bool keep_;
    long count_ = 0;
    int streak_ = 0;
    double period_max_ = 0.0;
    bool converged_ = false;
    std::deque<std::pair<double, std::vector<double>>> buffer_;
    std::vector<double> trace_;
    std::vector<Snapshot> history_;
};

std::vector<double> node_times(double s0, double L, int M, int periods) {
    std::vector<double> s(static_cast<std::size_t>(M * periods + 1));
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = s0 + L * static_cast<double>(k) / M;
    return s;
}

}  // namespace

SelfsimilarOrbit find_expanding_orbit(const Problem& problem, const InitialDatum& datum,
                                      const OrbitSearch& search, bool keep_history) {
    const auto& laws = problem.laws;
    if (!(laws.left.min_value() + laws.right.min_value() > 0.0))
        throw PreconditionError("expanding orbit requires min k1 + min k2 > 0");
    SelfsimilarOrbit orbit;
    orbit.kind = ProfileKind::expanding;
    orbit.b = search.orbit.b;
    orbit.chart = ChartId::v();
    auto state = init_state(orbit.chart, datum, problem.geometry, search.grid_points, search.start_time);
    orbit.theta = state.theta;
    const int M = search.orbit.nodes;
    PeriodWatcher watcher(M, search.orbit.periods, search.orbit_tol, keep_history);
    EvolveRequest rq;
    rq.sample_s = node_times(state.s, orbit.period(), M, search.orbit.max_periods);
    rq.s_end = rq.sample_s.back();
    rq.keep_snapshots = false;
    rq.on_sample = [&](const EvolutionState& st) { return watcher.push(st); };
    evolve(std::move(state), problem, rq, search.evolution);
    watcher.fill(orbit);
    return orbit;
}

namespace {

struct Classification {
    int direction = 0;  // +1: extinguishes before T, -1: after T
    bool failed = false;
};

EvolutionOptions fixed_step_options(const OrbitSearch& search, double L) {
    auto opt = search.evolution;
    opt.rule = TimeRule::semi_implicit;
    opt.adaptive = false;
    opt.ds = L / (search.orbit.nodes * search.substeps_per_node);
    opt.ds_max = opt.ds;
    return opt;
}

Classification classify(const Problem& problem, const InitialDatum& datum, double lambda, double T,
                        const OrbitSearch& search) {
    const ChartId chart = ChartId::w(T);
    const double L = std::log(search.orbit.b);
    const int M = search.orbit.nodes;
    Classification c;
    InitialDatum d = dilate_datum(datum, lambda, problem.laws, 0.0);
    EvolutionState state;
    try {
        state = init_state(chart, d, problem.geometry, search.grid_points, 0.0);
    } catch (const Error&) {
        c.direction = 1;
        c.failed = true;
        return c;
    }
    const double ref = mean(state.values);
    std::vector<double> means;
    EvolveRequest rq;
    rq.sample_s = node_times(state.s, L, M, search.shrinking_periods);
    rq.s_end = rq.sample_s.back();
    rq.keep_snapshots = false;
    rq.on_sample = [&](const EvolutionState& st) {
        const double m = mean(st.values);
        means.push_back(m);
        if (m - ref > 1.5) {
            c.direction = 1;
            return false;
        }
        if (m - ref < -1.5) {
            c.direction = -1;
            return false;
        }
        return true;
    };
    try {
        evolve(std::move(state), problem, rq, fixed_step_options(search, L));
    } catch (const Error&) {
        // folds and blow-up come from w growing without bound: early extinction
        c.direction = 1;
        c.failed = true;
        return c;
    }
    if (c.direction == 0) {
        const std::size_t n = means.size();
        const std::size_t back = std::min<std::size_t>(static_cast<std::size_t>(M), n - 1);
        c.direction = means[n - 1] - means[n - 1 - back] > 0.0 ? 1 : -1;
    }
    return c;
}

}  // namespace

SelfsimilarOrbit find_shrinking_orbit(const Problem& problem, const InitialDatum& datum, double T,
                                      const OrbitSearch& search, bool keep_history) {
    const auto& laws = problem.laws;
    if (!(laws.left.max_value() + laws.right.max_value() < 0.0))
        throw PreconditionError("shrinking orbit requires max k1 + max k2 < 0");
    SelfsimilarOrbit orbit;
    orbit.kind = ProfileKind::shrinking;
    orbit.b = search.orbit.b;
    orbit.horizon = T;
    orbit.chart = ChartId::w(T);

    // Bracket: small dilations extinguish early (+1), large ones late (-1).
    double lo = 1.0, hi = 1.0;
    const double grow = 1.02;
    int guard = 0;
    while (classify(problem, datum, lo, T, search).direction != 1) {
        lo /= grow;
        if (++guard > 200) throw ConvergenceError("shrinking orbit: no early-extinction dilation found");
    }
    if (hi == lo) hi = lo * grow;
    guard = 0;
    while (classify(problem, datum, hi, T, search).direction != -1) {
        lo = hi;
        hi *= grow;
        if (++guard > 200) throw ConvergenceError("shrinking orbit: no late-extinction dilation found");
    }
    int count = 0;
    while (hi / lo - 1.0 > 4e-16 && count < 80) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (classify(problem, datum, mid, T, search).direction == 1 ? lo : hi) = mid;
        ++count;
    }
    orbit.lambda = 0.5 * (lo + hi);
    orbit.bisections = count;

    const InitialDatum d = dilate_datum(datum, orbit.lambda, laws, 0.0);
    auto state = init_state(orbit.chart, d, problem.geometry, search.grid_points, 0.0);
    orbit.theta = state.theta;
    const double L = orbit.period();
    const int M = search.orbit.nodes;
    PeriodWatcher watcher(M, search.orbit.periods, search.orbit_tol, keep_history);
    EvolveRequest rq;
    rq.sample_s = node_times(state.s, L, M, search.shrinking_periods);
    rq.s_end = rq.sample_s.back();
    rq.keep_snapshots = false;
    rq.on_sample = [&](const EvolutionState& st) { return watcher.push(st); };
    evolve(std::move(state), problem, rq, fixed_step_options(search, L));
    watcher.fill(orbit);
    return orbit;
}

double measure_extinction(const Problem& problem, const InitialDatum& datum, const OrbitSearch& search) {
    auto state = init_state(ChartId::r(), datum, problem.geometry, search.grid_points, 0.0);
    EvolveRequest rq;
    rq.s_end = 1e6;
    rq.stop_on_extinction = true;
    rq.extinction_radius = search.extinction_radius;
    rq.keep_snapshots = false;
    auto opt = search.evolution;
    const auto tr = evolve(std::move(state), problem, rq, opt);
    if (!tr.extinct) throw ConvergenceError("r-chart run did not reach extinction");
    return tr.extinction_time;
}

ExtinctionTarget target_extinction(double T_target, const Problem& problem,
                                   const InitialDatum& reference, const OrbitSearch& search,
                                   int max_bisections) {
    const auto& laws = problem.laws;
    if (!(laws.left.max_value() + laws.right.max_value() < 0.0))
        throw PreconditionError("extinction targeting requires max k1 + max k2 < 0");
    if (!(T_target > 0.0)) throw PreconditionError("target extinction time must be positive");
    ExtinctionTarget out;
    const double tol = search.extinction_tol * T_target;
    auto measure = [&](double lambda) {
        const double T = measure_extinction(problem, dilate_datum(reference, lambda, laws, 0.0), search);
        out.evaluations.emplace_back(lambda, T);
        return T;
    };
    auto accept = [&](double lambda, double T) {
        out.lambda = lambda;
        out.extinction_time = T;
        out.datum = dilate_datum(reference, lambda, laws, 0.0);
        return out;
    };
    const double T1 = measure(1.0);
    if (std::abs(T1 - T_target) < tol) return accept(1.0, T1);
    // Extinction time scales like lambda^2 for scale-invariant laws; use it
    // only to centre the bracket.
    const double guess = std::sqrt(T_target / T1);
    double lo = guess / 1.05, hi = guess * 1.05;
    double Tlo = measure(lo), Thi = measure(hi);
    for (int k = 0; Tlo > T_target && k < 60; ++k) {
        hi = lo;
        Thi = Tlo;
        lo /= 1.5;
        Tlo = measure(lo);
    }
    for (int k = 0; Thi < T_target && k < 60; ++k) {
        lo = hi;
        Tlo = Thi;
        hi *= 1.5;
        Thi = measure(hi);
    }
    if (!(Tlo <= T_target && Thi >= T_target)) {
        throw ConvergenceError("extinction bracket not established; widen the datum family");
    }
    if (std::abs(Tlo - T_target) < tol) return accept(lo, Tlo);
    if (std::abs(Thi - T_target) < tol) return accept(hi, Thi);
    for (int k = 0; k < max_bisections; ++k) {
        const double mid = std::sqrt(lo * hi);
        const double Tm = measure(mid);
        ++out.bisections;
        if (std::abs(Tm - T_target) < tol) return accept(mid, Tm);
        (Tm < T_target ? lo : hi) = mid;
    }
    throw ConvergenceError("extinction targeting exceeded the bisection budget");
}

double graph_distance(const RecoveredSolution& a, const RecoveredSolution& b, std::size_t points) {
    const double lo = std::max(-a.xi1, -b.xi1);
    const double hi = std::min(a.xi2, b.xi2);
    double d = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        d = std::max(d, std::abs(a.value(x) - b.value(x)));
    }
    // endpoints that differ count as graph distance too
    return std::max({d, std::abs(a.xi1 - b.xi1), std::abs(a.xi2 - b.xi2)});
}

AncientReport ancient_limit(const std::vector<double>& horizons, const Problem& problem,
                            const InitialDatum& reference, const OrbitSearch& search) {
    if (horizons.size() < 3) throw PreconditionError("ancient limit needs at least three horizons");
    for (int side : {1, 2}) {
        const auto kind = problem.laws[side].kind();
        if (kind != LawKind::autonomous && kind != LawKind::constant)
            throw PreconditionError("ancient limit requires autonomous laws k(u) = k(bu)");
    }
    AncientReport rep;
    rep.horizons = horizons;
    const int window_samples = 9;
    std::vector<std::vector<RecoveredSolution>> W;
    for (double T : horizons) {
        const auto target = target_extinction(T, problem, reference, search);
        auto orbit = find_shrinking_orbit(problem, target.datum, T, search, true);
        // that in [-1, -1/4]  <=>  s = -log(-that)/2 in [0, log 2]
        std::vector<RecoveredSolution> slices;
        for (int j = 0; j < window_samples; ++j) {
            const double s = 0.5 * std::log(4.0) * j / (window_samples - 1);
            const auto& hist = orbit.history;
            const auto it = std::min_element(hist.begin(), hist.end(), [s](const Snapshot& x, const Snapshot& y) {
                return std::abs(x.s - s) < std::abs(y.s - s);
            });
            if (it == hist.end()) throw PreconditionError("ancient window needs a stored history");
            if (std::abs(it->s - s) <= 1e-9 * (1 + std::abs(s)) + 1e-12) {
                slices.push_back(recover_solution(orbit.chart, orbit.theta, it->values, s));
                continue;
            }
            // off-node window time: cubic interpolation in s over the
            // surrounding four history samples
            std::size_t i = static_cast<std::size_t>(std::upper_bound(hist.begin(), hist.end(), s,
                                                                      [](double v, const Snapshot& x) {
                                                                          return v < x.s;
                                                                      }) -
                                                     hist.begin());
            if (i < 2 || i + 1 >= hist.size()) throw PreconditionError("ancient window outside the stored history");
            const std::size_t i0 = i - 2;
            const double ds = hist[i].s - hist[i - 1].s;
            double w[4];
            num::cubic_lagrange_weights((s - hist[i - 1].s) / ds, w);
            std::vector<double> values(orbit.theta.size(), 0.0);
            for (int m = 0; m < 4; ++m) {
                for (std::size_t n = 0; n < values.size(); ++n) values[n] += w[m] * hist[i0 + m].values[n];
            }
            slices.push_back(recover_solution(orbit.chart, orbit.theta, values, s));
        }
        W.push_back(std::move(slices));
        orbit.history.clear();
        rep.orbits.push_back(std::move(orbit));
    }
    for (std::size_t k = 0; k + 1 < W.size(); ++k) {
        double d = 0.0;
        for (int j = 0; j < window_samples; ++j) d = std::max(d, graph_distance(W[k][j], W[k + 1][j]));
        rep.distances.push_back(d);
    }
    rep.decreasing = true;
    for (std::size_t k = 0; k + 1 < rep.distances.size(); ++k) {
        if (!(rep.distances[k + 1] < rep.distances[k])) rep.decreasing = false;
    }
    rep.final_distance = rep.distances.back();
    rep.certified = rep.decreasing && rep.final_distance < 10.0 * search.orbit_tol;
    if (rep.orbits.back().converged) rep.limit_similarity = similarity_residual(rep.orbits.back());
    return rep;
}

}  // namespace wedge
