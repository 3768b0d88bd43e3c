#include "wedge/geometry.hpp"

#include <cmath>
#include <sstream>

#include "wedge/error.hpp"
#include "wedge/numerics.hpp"

namespace wedge {

SectorGeometry::SectorGeometry(double beta, double sigma)
    : beta_(beta), theta0_(num::kPi / 2 - beta), sigma_(sigma), tan_beta_(std::tan(beta)) {
    if (!(beta > 0.0 && beta < num::kPi / 2)) {
        std::ostringstream os;
        os << "sector angle beta=" << beta << " outside (0, pi/2)";
        throw PreconditionError(os.str());
    }
    if (!(sigma > 0.0 && sigma < tan_beta_)) {
        std::ostringstream os;
        os << "slope margin sigma=" << sigma << " outside (0, tan(beta)=" << tan_beta_ << ")";
        throw PreconditionError(os.str());
    }
}

double SectorGeometry::omega1() const {
    return (1.0 + tan_beta_ - sigma_) / (sigma_ * std::cos(beta_));
}

double SectorGeometry::epsilon1() const { return 1.0 / (2.0 - sigma_ / tan_beta_); }

bool SectorGeometry::contains(double x, double y, double slack) const {
    return y >= std::abs(x) * tan_beta_ - slack * (1.0 + std::abs(y));
}

}  // namespace wedge
