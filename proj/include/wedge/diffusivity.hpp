#pragma once

#include <string>
#include <vector>

#include "wedge/numerics.hpp"

namespace wedge {

class SectorGeometry;

/// The slope-dependent diffusivity a(p) of u_t = a(u_x) u_xx.
class Diffusivity {
public:
    enum class Family { constant, curvature, polynomial, tabulated };

    static Diffusivity constant(double c);
    /// a(p) = 1 / (1 + p^2).
    static Diffusivity curvature();
    /// a(p) = sum_k coefficients[k] p^k.
    static Diffusivity polynomial(std::vector<double> coefficients);
    /// Natural cubic spline through (p, a) samples; constant extrapolation of
    /// the end values is not provided, so callers must stay inside the table.
    static Diffusivity tabulated(std::vector<double> p, std::vector<double> a);

    double operator()(double p) const;
    double derivative(double p) const;

    /// Antiderivative difference: integral of a over [lo, hi] (closed form
    /// where available, Gauss–Legendre otherwise).
    double integral(double lo, double hi) const;

    /// Throws PreconditionError unless a > 0 on [-max_slope, max_slope]
    /// (dense sampling).
    void require_positive(const SectorGeometry& geometry) const;

    Family family() const { return family_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    const std::vector<double>& table_p() const { return table_p_; }
    const std::vector<double>& table_a() const { return table_a_; }
    std::string family_name() const;

private:
    Family family_ = Family::constant;
    std::vector<double> coefficients_{1.0};
    std::vector<double> table_p_, table_a_;
    num::CubicSpline spline_;
};

}  // namespace wedge
