#include "wedge/sandwich.hpp"

#include <algorithm>
#include <cmath>

#include "wedge/error.hpp"

namespace wedge {

namespace {

struct Extremes {
    double max_excess = -INFINITY;
    double min_excess = INFINITY;
};

Extremes compare(const InitialDatum& datum, const Profile& profile, double c, std::size_t points) {
    const double L = std::sqrt(2.0 * c);
    const double lo = std::max(-datum.xi01(), -L * profile.left);
    const double hi = std::min(datum.xi02(), L * profile.right);
    Extremes e;
    if (!(hi > lo)) return e;
    for (std::size_t i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        const double f = L * profile.value_at(std::clamp(x / L, -profile.left, profile.right));
        const double d = f - datum.value(x);
        e.max_excess = std::max(e.max_excess, d);
        e.min_excess = std::min(e.min_excess, d);
    }
    return e;
}

// Smallest c at which pred flips from false to true (pred monotone in c).
double bisect_log(const std::function<bool(double)>& pred, double rel_tol, int& count) {
    double lo = 1.0, hi = 1.0;
    if (pred(1.0)) {
        while (pred(lo)) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-30) throw ConvergenceError("sandwich bracket collapsed towards zero");
        }
    } else {
        while (!pred(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e30) throw ConvergenceError("sandwich bracket escaped to infinity");
        }
    }
    while (hi / lo - 1.0 > rel_tol) {
        const double mid = std::sqrt(lo * hi);
        (pred(mid) ? hi : lo) = mid;
        ++count;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double classical_excess(const InitialDatum& datum, const Profile& profile, double c,
                        std::size_t points) {
    return compare(datum, profile, c, points).max_excess;
}

SandwichResult sandwich_parameters(const InitialDatum& datum, const Profile& minus,
                                   const Profile& plus, const SandwichOptions& options) {
    const auto& u = datum.u();
    if (*std::min_element(u.begin(), u.end()) <= 0.0)
        throw PreconditionError("sandwich requires a positive datum");
    if (minus.kind != plus.kind) throw PreconditionError("sandwich profiles must be of the same kind");
    const double scale = 1.0 + *std::max_element(u.begin(), u.end());
    const double slack = options.touch_tol * scale;
    SandwichResult r;
    // The classical families increase with the scale parameter, so "not below
    // the datum" and "above the datum" are both monotone in c.
    auto not_below = [&](double c) {
        return compare(datum, minus, c, options.points).max_excess > slack;
    };
    auto above = [&](double c) {
        return compare(datum, plus, c, options.points).min_excess >= -slack;
    };
    r.lower = bisect_log(not_below, options.rel_tol, r.bisections);
    r.upper = bisect_log(above, options.rel_tol, r.bisections);
    return r;
}

}  // namespace wedge
