#include "wedge/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wedge/error.hpp"
#include "wedge/numerics.hpp"

namespace wedge {

EvolutionOptions EvolutionOptions::from(const RunConfig& config) {
    EvolutionOptions o;
    o.rule = config.time_rule;
    if (config.time_rule == TimeRule::semi_implicit) {
        o.ds = config.time_value;
        o.adaptive = config.adaptive;
    } else {
        o.cfl = config.time_value;
        o.adaptive = false;
    }
    o.step_tol = config.step_tol;
    o.ds_max = config.ds_max;
    o.max_steps = config.max_steps;
    // The gradient bound keeps the denominator above epsilon1; a slightly
    // lower floor leaves room for discretization error before calling it a fold.
    o.denominator_floor = 0.98 * config.geometry.epsilon1();
    return o;
}

EvolutionState init_state(const ChartId& chart, const InitialDatum& datum,
                          const SectorGeometry& geometry, std::size_t n, double t0) {
    if (n < 5 || n % 2 == 0) throw PreconditionError("theta grid needs an odd number (>= 5) of nodes");
    EvolutionState st;
    st.chart = chart;
    st.theta = theta_grid(geometry, n);
    st.s = chart_s(chart, t0);
    st.values.resize(n);
    const double th0 = geometry.theta0();
    for (std::size_t i = 0; i < n; ++i) {
        const double th = st.theta[i];
        double R;
        if (i == 0) {
            R = datum.xi01() / std::sin(th0);
        } else if (i + 1 == n) {
            R = datum.xi02() / std::sin(th0);
        } else if (std::abs(th) < 1e-15) {
            R = datum.value(0.0);
        } else {
            const double rmax = th > 0 ? datum.xi02() / std::sin(th) : datum.xi01() / std::sin(-th);
            auto f = [&](double r) { return r * std::cos(th) - datum.value(r * std::sin(th)); };
            if (!(f(rmax) > 0.0)) {
                throw PreconditionError("datum and chart incompatible: no radius bracket at theta=" +
                                        std::to_string(th));
            }
            R = num::brent(f, 0.0, rmax, 1e-15 * rmax);
        }
        st.values[i] = chart_unknown(chart, R, st.s);
    }
    return st;
}

namespace {

struct Coefficients {
    std::vector<double> A, B;
};

double boundary_target(const EvolutionState& st, const Problem& pb, int side, double s, double q) {
    return boundary_slope(st.chart, side, s, q, pb.laws, pb.geometry);
}

double boundary_target_derivative(const EvolutionState& st, const Problem& pb, int side, double s,
                                  double q) {
    const double dq = 1e-6 * (1.0 + std::abs(q));
    return (boundary_target(st, pb, side, s, q + dq) - boundary_target(st, pb, side, s, q - dq)) /
           (2 * dq);
}

Coefficients coefficients(const EvolutionState& st, const Problem& pb, double floor, Diagnostics& diag) {
    const std::size_t n = st.values.size();
    const double h = st.h();
    const auto& q = st.values;
    Coefficients c;
    c.A.resize(n);
    c.B.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double qt;
        if (i == 0) {
            qt = boundary_target(st, pb, 1, st.s, q[0]);
        } else if (i + 1 == n) {
            qt = boundary_target(st, pb, 2, st.s, q[n - 1]);
        } else {
            qt = (q[i + 1] - q[i - 1]) / (2 * h);
        }
        const auto k = pde_coefficients(st.chart, st.theta[i], q[i], qt, st.s, pb.a);
        if (!(k.denominator > floor)) {
            std::ostringstream os;
            os << "chart denominator " << k.denominator << " below floor " << floor
               << " at theta=" << st.theta[i] << ", s=" << st.s << " (step " << st.step_count << ")";
            throw ChartFoldError(os.str());
        }
        diag.min_denominator = std::min(diag.min_denominator, k.denominator);
        diag.max_abs_q_theta = std::max(diag.max_abs_q_theta, std::abs(qt));
        c.A[i] = k.A;
        c.B[i] = k.B;
    }
    return c;
}

void require_finite(const EvolutionState& st) {
    for (double v : st.values) {
        if (!std::isfinite(v)) {
            const auto [mn, mx] = std::minmax_element(st.values.begin(), st.values.end());
            std::ostringstream os;
            os << "non-finite values after step " << st.step_count << " at s=" << st.s
               << " (finite range before failure: " << *mn << " .. " << *mx << ")";
            throw BlowUpError(os.str());
        }
    }
}

EvolutionState semi_implicit(const EvolutionState& st, const Problem& pb, double ds,
                             const EvolutionOptions& opt) {
    const std::size_t n = st.values.size();
    const double h = st.h();
    EvolutionState out = st;
    const auto co = coefficients(st, pb, opt.denominator_floor, out.diagnostics);
    const double s1 = st.s + ds;
    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    double ql = st.values.front(), qr = st.values.back();
    std::vector<double> sol;
    for (int it = 0; it < opt.boundary_iters; ++it) {
        const double gl = boundary_target(st, pb, 1, s1, ql);
        const double dgl = boundary_target_derivative(st, pb, 1, s1, ql);
        const double gr = boundary_target(st, pb, 2, s1, qr);
        const double dgr = boundary_target_derivative(st, pb, 2, s1, qr);
        for (std::size_t i = 0; i < n; ++i) {
            const double c = ds * co.A[i] / (h * h);
            rhs[i] = st.values[i] + ds * co.B[i];
            if (i == 0) {
                diag[i] = 1 + 2 * c + 2 * c * h * dgl;
                upper[i] = -2 * c;
                rhs[i] -= 2 * c * h * (gl - dgl * ql);
            } else if (i + 1 == n) {
                diag[i] = 1 + 2 * c - 2 * c * h * dgr;
                lower[i] = -2 * c;
                rhs[i] += 2 * c * h * (gr - dgr * qr);
            } else {
                lower[i] = -c;
                diag[i] = 1 + 2 * c;
                upper[i] = -c;
            }
        }
        num::solve_tridiagonal(lower, diag, upper, rhs);
        sol = rhs;
        const double change = std::max(std::abs(sol.front() - ql), std::abs(sol.back() - qr));
        ql = sol.front();
        qr = sol.back();
        if (!std::isfinite(change)) break;
        if (change <= opt.boundary_tol * (1.0 + std::abs(ql) + std::abs(qr))) break;
    }
    out.values = std::move(sol);
    out.s = s1;
    out.step_count = st.step_count + 1;
    require_finite(out);
    return out;
}

double newton_boundary(const std::function<double(double)>& F, double q0, const EvolutionOptions& opt) {
    double q = q0;
    for (int it = 0; it < opt.boundary_iters; ++it) {
        const double f = F(q);
        const double dq = 1e-7 * (1.0 + std::abs(q));
        const double df = (F(q + dq) - F(q - dq)) / (2 * dq);
        if (!(std::abs(df) > 0.0)) break;
        const double step = f / df;
        q -= step;
        if (std::abs(step) <= opt.boundary_tol * (1.0 + std::abs(q))) break;
    }
    return q;
}

EvolutionState explicit_step(const EvolutionState& st, const Problem& pb, double ds,
                             const EvolutionOptions& opt) {
    const std::size_t n = st.values.size();
    const double h = st.h();
    const auto& q = st.values;
    EvolutionState out = st;
    const auto co = coefficients(st, pb, opt.denominator_floor, out.diagnostics);
    const double s1 = st.s + ds;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out.values[i] = q[i] + ds * (co.A[i] * (q[i - 1] - 2 * q[i] + q[i + 1]) / (h * h) + co.B[i]);
    }
    auto left = [&](double q0) {
        const double g = boundary_target(st, pb, 1, s1, q0);
        return q0 - q[0] - ds * (co.A[0] * (2 * q[1] - 2 * q[0] - 2 * h * g) / (h * h) + co.B[0]);
    };
    auto right = [&](double qn) {
        const double g = boundary_target(st, pb, 2, s1, qn);
        return qn - q[n - 1] -
               ds * (co.A[n - 1] * (2 * q[n - 2] - 2 * q[n - 1] + 2 * h * g) / (h * h) + co.B[n - 1]);
    };
    out.values[0] = newton_boundary(left, q[0], opt);
    out.values[n - 1] = newton_boundary(right, q[n - 1], opt);
    out.s = s1;
    out.step_count = st.step_count + 1;
    require_finite(out);
    return out;
}

double step_error(const EvolutionState& a, const EvolutionState& b, bool relative) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
        scale = std::max(scale, std::abs(b.values[i]));
    }
    return relative ? diff / scale : diff / (1.0 + scale);
}

double min_value(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

double max_value(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// Zero of the quadratic through the last three (t, r^2) samples; r^2 is close
// to linear in t near extinction.
double extrapolate_extinction(const std::vector<std::pair<double, double>>& trace) {
    const std::size_t m = trace.size();
    if (m < 2) return trace.back().first;
    if (m == 2) {
        const auto [t0, r0] = trace[0];
        const auto [t1, r1] = trace[1];
        const double y0 = r0 * r0, y1 = r1 * r1;
        return t1 + y1 * (t1 - t0) / (y0 - y1);
    }
    const auto [t0, r0] = trace[m - 3];
    const auto [t1, r1] = trace[m - 2];
    const auto [t2, r2] = trace[m - 1];
    const double y0 = r0 * r0, y1 = r1 * r1, y2 = r2 * r2;
    // Newton form p(t) = y2 + d1 (t - t2) + d2 (t - t2)(t - t1)
    const double d1 = (y2 - y1) / (t2 - t1);
    const double d2 = ((y2 - y1) / (t2 - t1) - (y1 - y0) / (t1 - t0)) / (t2 - t0);
    // in tau = t - t2: d2 tau^2 + (d1 + d2 (t2 - t1)) tau + y2 = 0
    const double A = d2, B = d1 + d2 * (t2 - t1), C = y2;
    const double linear = -C / B;
    if (std::abs(A) < 1e-14 * std::abs(B)) return t2 + linear;
    const double disc = B * B - 4 * A * C;
    if (disc < 0) return t2 + linear;
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (B + std::copysign(sq, B));
    const double root1 = qq / A, root2 = C / qq;
    // the root continuing the linear trend
    return t2 + (std::abs(root1 - linear) < std::abs(root2 - linear) ? root1 : root2);
}

}  // namespace

EvolutionState step(const EvolutionState& state, const Problem& problem, double ds,
                    const EvolutionOptions& options) {
    if (!(ds > 0.0)) throw PreconditionError("step size must be positive");
    return options.rule == TimeRule::semi_implicit ? semi_implicit(state, problem, ds, options)
                                                   : explicit_step(state, problem, ds, options);
}

double explicit_step_limit(const EvolutionState& state, const Problem& problem, double cfl) {
    Diagnostics scratch;
    const auto co = coefficients(state, problem, 0.0, scratch);
    const double amax = *std::max_element(co.A.begin(), co.A.end());
    const double h = state.h();
    return cfl * h * h / (2.0 * amax);
}

std::vector<double> sample_times(double s0, double s1, int count) {
    return num::linspace(s0, s1, static_cast<std::size_t>(std::max(count, 2)));
}

Trajectory evolve(EvolutionState state, const Problem& problem, const EvolveRequest& request,
                  const EvolutionOptions& options) {
    Trajectory tr;
    tr.chart = state.chart;
    tr.theta = state.theta;
    const bool radial = state.chart.kind == ChartKind::r;
    const double r_initial = radial ? max_value(state.values) : 1.0;
    std::vector<double> stops;
    for (double s : request.sample_s) {
        if (s >= state.s - 1e-12 && s <= request.s_end + 1e-12) stops.push_back(s);
    }
    std::sort(stops.begin(), stops.end());
    std::size_t next = 0;
    bool keep_going = true;
    auto record = [&] {
        if (request.keep_snapshots) tr.snapshots.push_back({state.s, state.time(), state.values});
        if (request.on_sample && !request.on_sample(state)) keep_going = false;
    };
    while (next < stops.size() && stops[next] <= state.s + 1e-12) {
        ++next;
        record();
    }
    if (radial) tr.min_radius_trace.emplace_back(state.time(), min_value(state.values));

    double ds = options.ds;
    double err_prev = options.step_tol;
    const double eps = 1e-12 * (1.0 + std::abs(request.s_end));
    while (keep_going && state.s < request.s_end - eps) {
        if (tr.steps + tr.rejected >= options.max_steps) {
            throw ConvergenceError("evolution exhausted the step budget at s=" + std::to_string(state.s));
        }
        const double stop = next < stops.size() ? std::min(stops[next], request.s_end) : request.s_end;
        const double room = stop - state.s;
        double ds_try = std::min({ds, options.ds_max, room});
        if (options.rule == TimeRule::explicit_cfl) {
            ds_try = std::min(ds_try, explicit_step_limit(state, problem, options.cfl));
        }
        const bool clipped = ds_try >= room - eps;
        EvolutionState next_state;
        if (options.adaptive && options.rule == TimeRule::semi_implicit) {
            double err;
            try {
                const auto full = step(state, problem, ds_try, options);
                const auto half = step(state, problem, 0.5 * ds_try, options);
                next_state = step(half, problem, 0.5 * ds_try, options);
                err = step_error(full, next_state, radial);
            } catch (const ChartFoldError&) {
                if (ds_try <= options.ds_min) throw;
                err = INFINITY;
            } catch (const BlowUpError&) {
                if (ds_try <= options.ds_min) throw;
                err = INFINITY;
            }
            if (!(err <= options.step_tol)) {
                ++tr.rejected;
                const double fac = std::isfinite(err) ? 0.9 * std::sqrt(options.step_tol / err) : 0.25;
                ds = std::max(options.ds_min, ds_try * std::clamp(fac, 0.1, 0.9));
                continue;
            }
            const double e = std::max(err, 1e-16 * options.step_tol);
            double fac = 0.9 * std::pow(options.step_tol / e, 0.35) * std::pow(err_prev / e, 0.2);
            fac = std::clamp(fac, 0.2, 2.0);
            const double proposal = ds_try * fac;
            ds = clipped ? std::max(proposal, ds) : proposal;
            err_prev = e;
            next_state.step_count = state.step_count + 1;
        } else {
            next_state = step(state, problem, ds_try, options);
        }
        if (clipped) next_state.s = stop;
        state = std::move(next_state);
        ++tr.steps;
        if (radial) {
            const double rmin = min_value(state.values);
            tr.min_radius_trace.emplace_back(state.time(), rmin);
            if (request.stop_on_extinction && rmin < request.extinction_radius * r_initial) {
                tr.extinct = true;
                tr.extinction_time = extrapolate_extinction(tr.min_radius_trace);
                break;
            }
        }
        while (next < stops.size() && stops[next] <= state.s + eps) {
            ++next;
            record();
        }
    }
    tr.diagnostics = state.diagnostics;
    tr.final_state = std::move(state);
    return tr;
}

}  // namespace wedge
