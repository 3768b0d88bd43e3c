#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wedge/boundary_law.hpp"
#include "wedge/diffusivity.hpp"
#include "wedge/geometry.hpp"

namespace wedge {

/// Initial graph u0 on [-xi01, xi02], stored as values and slopes on a
/// uniform grid and evaluated by cubic Hermite pieces.
class InitialDatum {
public:
    InitialDatum() = default;
    InitialDatum(double xi01, double xi02, std::vector<double> u, std::vector<double> ux);

    /// Samples f (value) and df (slope) on n uniform points.
    static InitialDatum sample(double xi01, double xi02, std::size_t n,
                               const std::function<double(double)>& f,
                               const std::function<double(double)>& df);

    double xi01() const { return xi01_; }
    double xi02() const { return xi02_; }
    std::size_t size() const { return u_.size(); }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& ux() const { return ux_; }

    double value(double x) const;
    double slope(double x) const;
    /// Second derivative at grid node i from centered differences of the slopes.
    double second_derivative_at(std::size_t i) const;

    /// u scaled by lambda on the same interval (generally not admissible; used
    /// by comparison tests).
    InitialDatum scaled_values(double lambda) const;

private:
    double xi01_ = 0.0, xi02_ = 0.0;
    std::vector<double> x_, u_, ux_;
};

struct DatumCheck {
    double min_value = 0.0;
    double endpoint_defect = 0.0;       // distance of endpoints from the sector rays
    double compatibility_defect = 0.0;  // |u0x(-xi01) + k1| and |u0x(xi02) - k2|
    double max_abs_slope = 0.0;
    bool positive = false;
    bool on_rays = false;
    bool compatible = false;
    bool gradient_ok = false;

    bool ok() const { return positive && on_rays && compatible && gradient_ok; }
    std::string describe() const;
};

/// Checks the structural conditions on an initial datum at time `t`.
DatumCheck check_datum(const InitialDatum& datum, const SectorGeometry& geometry,
                       const LawPair& laws, double t = 0.0, double tol = 1e-9);

/// Throws PreconditionError describing the first failed condition.
void require_valid_datum(const InitialDatum& datum, const SectorGeometry& geometry,
                         const LawPair& laws, double t = 0.0, double tol = 1e-9);

/// Quadratic Bezier graph from A1 = (-xi1, xi1 tan(beta)) to
/// A2 = (xi2, xi2 tan(beta)), tangent there to the lines of slope
/// -k1(t, xi1 tan(beta)) and k2(t, xi2 tan(beta)); the control point is the
/// intersection A3 of those lines. Convex when k1 + k2 > 0, concave when < 0.
InitialDatum tangent_bezier_datum(const SectorGeometry& geometry, const LawPair& laws, double xi1,
                                  double xi2, double t = 0.0, std::size_t points = 2001);

struct ConvexDatum {
    InitialDatum datum;
    double x_prime = 0.0;       // where l1 meets the right ray
    double corner_x = 0.0;      // A3
    double corner_y = 0.0;
    double curvature_floor = 0.0;  // min over the grid of a(u0x) u0xx
};

/// Convex datum of the uniqueness argument: A1 = (-1, tan(beta)), line l1 of
/// slope -k1(t, tan(beta)) meeting the right ray at x', A2 on the right ray at
/// x' + eps_prime with slope k2 there; the corner A3 is smoothed into a
/// strictly convex arc tangent to l1 at A1 and to l2 at A2.
ConvexDatum build_convex_datum(const SectorGeometry& geometry, const LawPair& laws,
                               const Diffusivity& a, double eps_prime,
                               std::size_t points = 2001, double t = 0.0);

/// Largest eps' for which the corner of build_convex_datum stays inside S.
double max_convex_eps_prime(const SectorGeometry& geometry, const LawPair& laws, double t = 0.0);

/// Dilation u(x) -> lambda u(x / lambda) (endpoints stay on the rays) with the
/// endpoint slopes re-smoothed to the compatibility values at time t.
InitialDatum dilate_datum(const InitialDatum& datum, double lambda, const LawPair& laws,
                          double t = 0.0);

}  // namespace wedge
