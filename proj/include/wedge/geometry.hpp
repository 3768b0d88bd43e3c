#pragma once

namespace wedge {

/// Half-angle data of the sector S = {y > |x| tan(beta)}.
///
/// theta0 = pi/2 - beta is the polar half-opening measured from the y-axis;
/// sigma is the slope margin so admissible slopes lie in
/// [-tan(beta) + sigma, tan(beta) - sigma].
class SectorGeometry {
public:
    SectorGeometry(double beta, double sigma);

    double beta() const { return beta_; }
    double theta0() const { return theta0_; }
    double sigma() const { return sigma_; }
    double tan_beta() const { return tan_beta_; }

    /// tan(beta) - sigma.
    double max_slope() const { return tan_beta_ - sigma_; }

    /// Gradient constant of the omega chart: (1 + tan(beta) - sigma) / (sigma cos(beta)).
    double omega1() const;
    /// Denominator floor 1 / (2 - sigma cot(beta)).
    double epsilon1() const;

    /// True when (x, y) lies in the closed sector (with a relative slack).
    bool contains(double x, double y, double slack = 1e-12) const;

private:
    double beta_;
    double theta0_;
    double sigma_;
    double tan_beta_;
};

}  // namespace wedge
