#pragma once

#include "wedge/initial_datum.hpp"
#include "wedge/profile.hpp"

namespace wedge {

/// Scalings at which the classical solutions built from `minus` and `plus`
/// touch the datum from below and above.
///
/// Expanding profiles: lower = t-, upper = t+ with
///   sqrt(2 t-) phi-(x / sqrt(2 t-)) <= u0 <= sqrt(2 t+) phi+(x / sqrt(2 t+)).
/// Shrinking profiles: lower = T-, upper = T+ in the same sense with psi.
/// Graphs are compared on the intersection of their supports.
struct SandwichResult {
    double lower = 0.0;
    double upper = 0.0;
    int bisections = 0;
};

struct SandwichOptions {
    std::size_t points = 1000;
    double touch_tol = 1e-9;  // relative slack of the pointwise inequality
    double rel_tol = 1e-12;   // relative width of the final bracket
};

SandwichResult sandwich_parameters(const InitialDatum& datum, const Profile& minus,
                                   const Profile& plus, const SandwichOptions& options = {});

/// max over the common support of (sqrt(2c) f(x/sqrt(2c)) - u0(x)).
double classical_excess(const InitialDatum& datum, const Profile& profile, double c,
                        std::size_t points = 1000);

}  // namespace wedge
