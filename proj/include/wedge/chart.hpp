#pragma once

#include <limits>
#include <string>
#include <vector>

#include "wedge/boundary_law.hpp"
#include "wedge/diffusivity.hpp"
#include "wedge/geometry.hpp"
#include "wedge/numerics.hpp"

namespace wedge {

/// Coordinate systems flattening the sector to the strip [-theta0, theta0].
///
///   omega:  R = e^rho,                 t = s
///   v(n):   R = e^s e^rho,             t = e^{2s} - 1/n  (n = inf: t = e^{2s})
///   w(T):   R = e^{-s} e^{-rho},       t = T - e^{-2s}
///   r:      R = rho,                   t = s
///
/// with x = R sin(theta), y = R cos(theta).
enum class ChartKind { omega, v, w, r };

struct ChartId {
    ChartKind kind = ChartKind::omega;
    double n = std::numeric_limits<double>::infinity();  // v chart only
    double T = 1.0;                                       // w chart only

    static ChartId omega() { return {ChartKind::omega}; }
    static ChartId v(double n = std::numeric_limits<double>::infinity());
    static ChartId w(double T);
    static ChartId r() { return {ChartKind::r}; }

    bool is_log() const { return kind != ChartKind::r; }
    std::string name() const;
};

ChartKind chart_kind_from_string(const std::string& text);

struct ChartPoint {
    double theta = 0.0;
    double rho = 0.0;  // log-radius type unknown (radius for the r chart)
    double s = 0.0;
};

struct PhysicalPoint {
    double x = 0.0, y = 0.0, t = 0.0;
};

ChartPoint to_chart(const ChartId& chart, double x, double y, double t);
PhysicalPoint from_chart(const ChartId& chart, const ChartPoint& p);

/// Physical time of chart time s, and its inverse.
double chart_time(const ChartId& chart, double s);
double chart_s(const ChartId& chart, double t);

/// Polar radius represented by unknown value q at chart time s, and inverse.
double chart_radius(const ChartId& chart, double q, double s);
double chart_unknown(const ChartId& chart, double radius, double s);

/// cos(theta) + omega_theta sin(theta) expressed in the chart's unknown; the
/// common validity denominator of all four charts.
double chart_denominator(const ChartId& chart, double theta, double q, double q_theta);

struct Derivatives {
    double ux = 0.0, uxx = 0.0, ut = 0.0;
};

/// Physical derivatives from the chart unknown and its derivatives. Throws
/// ChartFoldError when the denominator falls below `floor`.
Derivatives convert_derivatives(const ChartId& chart, double theta, double q, double q_theta,
                                double q_theta_theta, double q_s, double s, double floor = 0.0);

/// Chart PDE in the form q_s = A q_thetatheta + B.
struct PdeCoefficients {
    double A = 0.0, B = 0.0, denominator = 0.0;
};
PdeCoefficients pde_coefficients(const ChartId& chart, double theta, double q, double q_theta,
                                 double s, const Diffusivity& a);

/// tan(theta0 + arctan k) with k = k_side(t(s), R cos(theta0)); multiplied by
/// the radius for the r chart. Throws LawRangeError if the denominator
/// cos(theta0) - k sin(theta0) is not positive.
double boundary_transfer(const ChartId& chart, int side, double s, double q, const LawPair& laws,
                         const SectorGeometry& geometry);

/// The Neumann value q_theta(-theta0) (side 1) or q_theta(theta0) (side 2)
/// demanded by the contact law, including each chart's sign convention.
double boundary_slope(const ChartId& chart, int side, double s, double q, const LawPair& laws,
                      const SectorGeometry& geometry);

/// Graph of u recovered from chart samples at time s.
struct RecoveredSolution {
    double t = 0.0;
    double xi1 = 0.0, xi2 = 0.0;
    std::vector<double> x_nodes, u_nodes, ux_nodes;  // one per theta node
    std::vector<double> x, u;                        // uniform x resample
    num::Pchip interpolant;                          // through the node data

    double value(double xq) const;
};

/// Maps each theta node through the chart inverse and resamples u onto a
/// uniform grid of [-xi1, xi2] with a monotone cubic. Throws ChartFoldError
/// unless x increases strictly along the grid.
RecoveredSolution recover_solution(const ChartId& chart, const std::vector<double>& theta,
                                   const std::vector<double>& values, double s,
                                   std::size_t points = 0);

/// Uniform theta grid with n nodes on [-theta0, theta0].
std::vector<double> theta_grid(const SectorGeometry& geometry, std::size_t n);

/// Centered (one-sided second-order at the ends) theta derivative.
std::vector<double> theta_derivative(const std::vector<double>& values, double h);

}  // namespace wedge
