#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Small numerical kernels shared by the modules: interpolation, quadrature,
// tridiagonal solves and scalar root finding.
namespace wedge::num {

inline constexpr double kPi = 3.14159265358979323846;

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);

/// Cubic Hermite interpolation on a sorted grid with value and derivative data.
/// Returns {value, derivative}. Arguments outside the grid are clamped.
struct HermiteValue {
    double value;
    double slope;
};
HermiteValue hermite(std::span<const double> x, std::span<const double> y,
                     std::span<const double> dy, double xq);

/// Fritsch–Carlson monotone cubic slopes for data (x, y).
std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y);

/// Monotone piecewise-cubic interpolant (shape preserving).
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double xq) const;
    double derivative(double xq) const;
    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, d_;
};

/// Natural cubic spline; C² across knots.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double xq) const;
    double derivative(double xq) const;
    double second_derivative(double xq) const;

private:
    std::size_t segment(double xq) const;
    std::vector<double> x_, y_, m_;
};

/// Composite Simpson rule on a uniform grid; falls back to a trapezoid
/// correction on the last panel when the number of intervals is odd.
double simpson(std::span<const double> y, double h);

/// Solves a tridiagonal system in place (Thomas algorithm).
/// lower[0] and upper[n-1] are ignored. Throws on a zero pivot.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

/// Bracketed root of a scalar function (Brent's method).
double brent(const std::function<double(double)>& f, double a, double b, double xtol,
             int max_iter = 200);

/// Four-point Lagrange interpolation weights at fractional position
/// `frac` between nodes 1 and 2 of a stencil {0,1,2,3}.
void cubic_lagrange_weights(double frac, double w[4]);

}  // namespace wedge::num
