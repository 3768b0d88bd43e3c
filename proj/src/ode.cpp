#include "wedge/ode.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "wedge/error.hpp"
#include "wedge/numerics.hpp"

namespace wedge::ode {

namespace odeint = boost::numeric::odeint;

namespace {

auto make_stepper(Tolerance tol) {
    return odeint::make_dense_output(tol.atol, tol.rtol, odeint::runge_kutta_dopri5<State2>());
}

}  // namespace

EventResult integrate_to_event(const Rhs2& f, double z0, const State2& y0,
                               const std::function<double(double, const State2&)>& event,
                               double z_max, Tolerance tol,
                               const std::function<bool(double, const State2&)>& abort,
                               double ztol) {
    auto system = [&f](const State2& y, State2& dy, double z) { dy = f(z, y); };
    auto stepper = make_stepper(tol);
    stepper.initialize(y0, z0, 1e-3);
    double g_old = event(z0, y0);
    EventResult out;
    for (int steps = 0; steps < 200000; ++steps) {
        const auto [za, zb] = stepper.do_step(system);
        const State2 yb = stepper.current_state();
        if (!std::isfinite(yb[0]) || !std::isfinite(yb[1])) {
            out.aborted = true;
            out.z = zb;
            out.y = yb;
            return out;
        }
        const double g_new = event(zb, yb);
        if ((g_old > 0.0) != (g_new > 0.0) || g_new == 0.0) {
            State2 y;
            auto g_at = [&](double z) {
                stepper.calc_state(z, y);
                return event(z, y);
            };
            const double zc = g_new == 0.0 ? zb : num::brent(g_at, za, zb, ztol);
            stepper.calc_state(zc, y);
            out.found = true;
            out.z = zc;
            out.y = y;
            return out;
        }
        if (abort && abort(zb, yb)) {
            out.aborted = true;
            out.z = zb;
            out.y = yb;
            return out;
        }
        if (zb >= z_max) {
            out.z = zb;
            out.y = yb;
            return out;
        }
        g_old = g_new;
    }
    throw ConvergenceError("ODE integration exceeded the step budget");
}

std::vector<State2> integrate_at(const Rhs2& f, double z0, const State2& y0,
                                 const std::vector<double>& zs, Tolerance tol) {
    auto system = [&f](const State2& y, State2& dy, double z) { dy = f(z, y); };
    std::vector<State2> out;
    out.reserve(zs.size());
    if (zs.empty()) return out;
    auto stepper = make_stepper(tol);
    stepper.initialize(y0, z0, 1e-3);
    for (double z : zs) {
        if (z <= z0) {
            out.push_back(y0);
            continue;
        }
        while (stepper.current_time() < z) stepper.do_step(system);
        State2 y;
        stepper.calc_state(z, y);
        out.push_back(y);
    }
    return out;
}

}  // namespace wedge::ode
