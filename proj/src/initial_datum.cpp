#include "wedge/initial_datum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "wedge/error.hpp"
#include "wedge/numerics.hpp"

namespace wedge {

InitialDatum::InitialDatum(double xi01, double xi02, std::vector<double> u, std::vector<double> ux)
    : xi01_(xi01), xi02_(xi02), u_(std::move(u)), ux_(std::move(ux)) {
    if (!(xi01 > 0.0 && xi02 > 0.0)) throw PreconditionError("datum endpoints must be positive");
    if (u_.size() < 5 || u_.size() != ux_.size())
        throw PreconditionError("datum needs matching value/slope samples (at least 5)");
    x_ = num::linspace(-xi01, xi02, u_.size());
    for (std::size_t i = 0; i < u_.size(); ++i) {
        if (!std::isfinite(u_[i]) || !std::isfinite(ux_[i])) throw PreconditionError("datum samples not finite");
    }
}

InitialDatum InitialDatum::sample(double xi01, double xi02, std::size_t n,
                                  const std::function<double(double)>& f,
                                  const std::function<double(double)>& df) {
    const auto x = num::linspace(-xi01, xi02, n);
    std::vector<double> u(n), ux(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = f(x[i]);
        ux[i] = df(x[i]);
    }
    return InitialDatum(xi01, xi02, std::move(u), std::move(ux));
}

double InitialDatum::value(double x) const { return num::hermite(x_, u_, ux_, x).value; }

double InitialDatum::slope(double x) const { return num::hermite(x_, u_, ux_, x).slope; }

double InitialDatum::second_derivative_at(std::size_t i) const {
    const std::size_t n = ux_.size();
    const double h = x_[1] - x_[0];
    if (i == 0) return (-3 * ux_[0] + 4 * ux_[1] - ux_[2]) / (2 * h);
    if (i + 1 == n) return (3 * ux_[n - 1] - 4 * ux_[n - 2] + ux_[n - 3]) / (2 * h);
    return (ux_[i + 1] - ux_[i - 1]) / (2 * h);
}

InitialDatum InitialDatum::scaled_values(double lambda) const {
    auto u = u_;
    auto ux = ux_;
    for (auto& v : u) v *= lambda;
    for (auto& v : ux) v *= lambda;
    return InitialDatum(xi01_, xi02_, std::move(u), std::move(ux));
}

std::string DatumCheck::describe() const {
    std::ostringstream os;
    if (!positive) os << "datum not positive (min " << min_value << "); ";
    if (!on_rays) os << "endpoints off the sector rays (defect " << endpoint_defect << "); ";
    if (!compatible) os << "compatibility violated (defect " << compatibility_defect << "); ";
    if (!gradient_ok) os << "slope bound violated (max |u0x| " << max_abs_slope << "); ";
    return os.str();
}

DatumCheck check_datum(const InitialDatum& datum, const SectorGeometry& geometry,
                       const LawPair& laws, double t, double tol) {
    DatumCheck c;
    const auto& u = datum.u();
    const auto& ux = datum.ux();
    c.min_value = *std::min_element(u.begin(), u.end());
    c.positive = c.min_value > 0.0;
    const double tb = geometry.tan_beta();
    const double scale = 1.0 + std::max(datum.xi01(), datum.xi02());
    c.endpoint_defect = std::max(std::abs(u.front() - datum.xi01() * tb),
                                 std::abs(u.back() - datum.xi02() * tb));
    c.on_rays = c.endpoint_defect <= tol * scale;
    c.compatibility_defect = std::max(std::abs(ux.front() + laws.left(t, u.front())),
                                      std::abs(ux.back() - laws.right(t, u.back())));
    c.compatible = c.compatibility_defect <= tol;
    for (double s : ux) c.max_abs_slope = std::max(c.max_abs_slope, std::abs(s));
    c.gradient_ok = c.max_abs_slope <= geometry.max_slope() + tol;
    return c;
}

void require_valid_datum(const InitialDatum& datum, const SectorGeometry& geometry,
                         const LawPair& laws, double t, double tol) {
    const auto c = check_datum(datum, geometry, laws, t, tol);
    if (!c.ok()) throw PreconditionError("invalid initial datum: " + c.describe());
}

namespace {

struct Bezier {
    double x1, y1, x3, y3, x2, y2;

    double param_at(double x) const {
        const double a = x1 - 2 * x3 + x2;
        const double b = 2 * (x3 - x1);
        const double c = x1 - x;
        if (std::abs(a) < 1e-14 * (std::abs(b) + 1.0)) return -c / b;
        const double disc = std::max(0.0, b * b - 4 * a * c);
        return (-2 * c) / (b + std::sqrt(disc));
    }
    // returns value, slope, second derivative at abscissa x
    std::array<double, 3> at(double x) const {
        const double s = std::clamp(param_at(x), 0.0, 1.0);
        const double y = (1 - s) * (1 - s) * y1 + 2 * s * (1 - s) * y3 + s * s * y2;
        const double dx = 2 * (1 - s) * (x3 - x1) + 2 * s * (x2 - x3);
        const double dy = 2 * (1 - s) * (y3 - y1) + 2 * s * (y2 - y3);
        const double ddx = 2 * (x1 - 2 * x3 + x2);
        const double ddy = 2 * (y1 - 2 * y3 + y2);
        return {y, dy / dx, (dx * ddy - dy * ddx) / (dx * dx * dx)};
    }
};

}  // namespace

InitialDatum tangent_bezier_datum(const SectorGeometry& geometry, const LawPair& laws, double xi1,
                                  double xi2, double t, std::size_t points) {
    if (!(xi1 > 0.0 && xi2 > 0.0)) throw PreconditionError("bezier datum: endpoints must be positive");
    const double tb = geometry.tan_beta();
    const double x1 = -xi1, y1 = xi1 * tb;
    const double x2 = xi2, y2 = xi2 * tb;
    const double m1 = -laws.left(t, y1);
    const double m2 = laws.right(t, y2);
    if (std::abs(m2 - m1) < 1e-14) throw PreconditionError("bezier datum: tangent lines are parallel");
    // y1 + m1 (x - x1) = y2 + m2 (x - x2)
    const double x3 = (y2 - y1 + m1 * x1 - m2 * x2) / (m1 - m2);
    const double y3 = y1 + m1 * (x3 - x1);
    if (!(x3 > x1 && x3 < x2)) {
        std::ostringstream os;
        os << "bezier datum: tangent lines meet at x=" << x3 << " outside (" << x1 << ", " << x2 << ")";
        throw PreconditionError(os.str());
    }
    if (!geometry.contains(x3, y3, 0.0)) throw PreconditionError("bezier datum: corner outside the sector");
    const Bezier bz{x1, y1, x3, y3, x2, y2};
    auto f = [&](double x) { return bz.at(x)[0]; };
    auto df = [&](double x) { return bz.at(x)[1]; };
    auto d = InitialDatum::sample(xi1, xi2, points, f, df);
    // exact endpoint data
    auto u = d.u();
    auto ux = d.ux();
    u.front() = y1;
    u.back() = y2;
    ux.front() = m1;
    ux.back() = m2;
    return InitialDatum(xi1, xi2, std::move(u), std::move(ux));
}

double max_convex_eps_prime(const SectorGeometry& geometry, const LawPair& laws, double t) {
    const double tb = geometry.tan_beta();
    const double k1 = laws.left(t, tb);
    const double x_prime = (tb - k1) / (tb + k1);
    // corner abscissa as a function of X2 = x' + eps; admissible while x3 < x'
    // (l2 then meets l1 before l1 leaves S). Bisect on eps.
    auto corner_ok = [&](double eps) {
        const double X2 = x_prime + eps;
        const double k2 = laws.right(t, X2 * tb);
        const double m1 = -k1, m2 = k2;
        if (std::abs(m1 - m2) < 1e-14) return false;
        const double x3 = (X2 * tb - tb + m1 * (-1.0) - m2 * X2) / (m1 - m2);
        return x3 > -1.0 && x3 < x_prime;
    };
    double lo = 0.0, hi = 1.0;
    while (corner_ok(hi) && hi < 1e6) {
        lo = hi;
        hi *= 2;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (corner_ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

ConvexDatum build_convex_datum(const SectorGeometry& geometry, const LawPair& laws,
                               const Diffusivity& a, double eps_prime, std::size_t points, double t) {
    if (!(laws.left.min_value() + laws.right.min_value() > 0.0))
        throw PreconditionError("convex datum requires min k1 + min k2 > 0");
    if (!(eps_prime > 0.0)) throw PreconditionError("convex datum requires eps' > 0");
    const double tb = geometry.tan_beta();
    const double k1 = laws.left(t, tb);
    const double num = tb - k1;
    if (!(num > 0.0) || !(tb + k1 > 0.0))
        throw PreconditionError("convex datum degenerate: x' = (tan(beta) - k1)/(tan(beta) + k1) is not positive");
    ConvexDatum out;
    out.x_prime = num / (tb + k1);
    const double eps_max = max_convex_eps_prime(geometry, laws, t);
    if (!(eps_prime < eps_max)) {
        std::ostringstream os;
        os << "eps'=" << eps_prime << " too large: corner leaves S (maximal admissible eps' " << eps_max << ")";
        throw PreconditionError(os.str());
    }
    const double X2 = out.x_prime + eps_prime;
    out.datum = tangent_bezier_datum(geometry, laws, 1.0, X2, t, points);
    const double m1 = -k1;
    const double m2 = laws.right(t, X2 * tb);
    out.corner_x = (X2 * tb - tb - m1 - m2 * X2) / (m1 - m2);
    out.corner_y = tb + m1 * (out.corner_x + 1.0);
    double floor = 1e300;
    for (std::size_t i = 0; i < out.datum.size(); ++i) {
        floor = std::min(floor, a(out.datum.ux()[i]) * out.datum.second_derivative_at(i));
    }
    out.curvature_floor = floor;
    return out;
}

InitialDatum dilate_datum(const InitialDatum& datum, double lambda, const LawPair& laws, double t) {
    if (!(lambda > 0.0)) throw PreconditionError("dilation factor must be positive");
    const double xi1 = lambda * datum.xi01();
    const double xi2 = lambda * datum.xi02();
    const double xl = -xi1, xr = xi2;
    const double uL = lambda * datum.u().front();
    const double uR = lambda * datum.u().back();
    const double dl = -laws.left(t, uL) - datum.ux().front();
    const double dr = laws.right(t, uR) - datum.ux().back();
    const double w = 0.25 * (xi1 + xi2);
    // Wendland C2 bump: chi(0) = 1, chi'(0) = 0, chi = 0 beyond 1
    auto chi = [](double d) { return d >= 1.0 ? 0.0 : std::pow(1 - d, 4) * (4 * d + 1); };
    auto dchi = [](double d) { return d >= 1.0 ? 0.0 : -20.0 * d * std::pow(1 - d, 3); };
    auto f = [&](double x) {
        const double dL = (x - xl) / w, dR = (xr - x) / w;
        return lambda * datum.value(x / lambda) + dl * (x - xl) * chi(dL) + dr * (x - xr) * chi(dR);
    };
    auto df = [&](double x) {
        const double dL = (x - xl) / w, dR = (xr - x) / w;
        return datum.slope(x / lambda) + dl * (chi(dL) + dL * dchi(dL)) + dr * (chi(dR) + dR * dchi(dR));
    };
    auto out = InitialDatum::sample(xi1, xi2, datum.size(), f, df);
    auto u = out.u();
    auto ux = out.ux();
    u.front() = uL;
    u.back() = uR;
    ux.front() = -laws.left(t, uL);
    ux.back() = laws.right(t, uR);
    return InitialDatum(xi1, xi2, std::move(u), std::move(ux));
}

}  // namespace wedge
