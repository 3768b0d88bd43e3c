#pragma once

#include <array>
#include <functional>
#include <vector>

namespace wedge::ode {

using State2 = std::array<double, 2>;
using Rhs2 = std::function<State2(double, const State2&)>;

struct Tolerance {
    double rtol = 1e-12;
    double atol = 1e-13;
};

struct EventResult {
    bool found = false;
    bool aborted = false;
    double z = 0.0;
    State2 y{};
};

/// Integrates y' = f(z, y) forward from z0 with adaptive Dormand–Prince steps
/// until event(z, y) changes sign, abort(z, y) returns true, or z exceeds
/// z_max. The crossing is located on the dense-output interpolant to `ztol`.
EventResult integrate_to_event(const Rhs2& f, double z0, const State2& y0,
                               const std::function<double(double, const State2&)>& event,
                               double z_max, Tolerance tol = {},
                               const std::function<bool(double, const State2&)>& abort = {},
                               double ztol = 1e-13);

/// Integrates forward from z0 and returns the state at each (increasing) z.
std::vector<State2> integrate_at(const Rhs2& f, double z0, const State2& y0,
                                 const std::vector<double>& zs, Tolerance tol = {});

}  // namespace wedge::ode
