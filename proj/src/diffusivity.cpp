#include "wedge/diffusivity.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "wedge/error.hpp"
#include "wedge/geometry.hpp"

namespace wedge {

Diffusivity Diffusivity::constant(double c) {
    if (!(c > 0.0)) throw PreconditionError("constant diffusivity must be positive");
    Diffusivity d;
    d.family_ = Family::constant;
    d.coefficients_ = {c};
    return d;
}

Diffusivity Diffusivity::curvature() {
    Diffusivity d;
    d.family_ = Family::curvature;
    d.coefficients_.clear();
    return d;
}

Diffusivity Diffusivity::polynomial(std::vector<double> coefficients) {
    if (coefficients.empty()) throw PreconditionError("polynomial diffusivity needs coefficients");
    Diffusivity d;
    d.family_ = Family::polynomial;
    d.coefficients_ = std::move(coefficients);
    return d;
}

Diffusivity Diffusivity::tabulated(std::vector<double> p, std::vector<double> a) {
    Diffusivity d;
    d.family_ = Family::tabulated;
    d.coefficients_.clear();
    d.spline_ = num::CubicSpline(p, a);
    d.table_p_ = std::move(p);
    d.table_a_ = std::move(a);
    return d;
}

double Diffusivity::operator()(double p) const {
    switch (family_) {
        case Family::constant:
            return coefficients_[0];
        case Family::curvature:
            return 1.0 / (1.0 + p * p);
        case Family::polynomial: {
            double acc = 0.0;
            for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * p + *it;
            return acc;
        }
        case Family::tabulated:
            return spline_(p);
    }
    return 0.0;
}

double Diffusivity::derivative(double p) const {
    switch (family_) {
        case Family::constant:
            return 0.0;
        case Family::curvature: {
            const double q = 1.0 + p * p;
            return -2.0 * p / (q * q);
        }
        case Family::polynomial: {
            double acc = 0.0;
            for (std::size_t k = coefficients_.size(); k-- > 1;) acc = acc * p + static_cast<double>(k) * coefficients_[k];
            return acc;
        }
        case Family::tabulated:
            return spline_.derivative(p);
    }
    return 0.0;
}

double Diffusivity::integral(double lo, double hi) const {
    switch (family_) {
        case Family::constant:
            return coefficients_[0] * (hi - lo);
        case Family::curvature:
            return std::atan(hi) - std::atan(lo);
        case Family::polynomial: {
            auto prim = [&](double p) {
                double acc = 0.0;
                for (std::size_t k = coefficients_.size(); k-- > 0;)
                    acc = acc * p + coefficients_[k] / static_cast<double>(k + 1);
                return acc * p;
            };
            return prim(hi) - prim(lo);
        }
        case Family::tabulated:
            break;
    }
    // 8-point Gauss–Legendre on 64 panels
    static constexpr std::array<double, 4> nodes{0.1834346424956498, 0.5255324099163290,
                                                 0.7966664774136267, 0.9602898564975363};
    static constexpr std::array<double, 4> weights{0.3626837833783620, 0.3137066458778873,
                                                   0.2223810344533745, 0.1012285362903763};
    const int panels = 64;
    const double h = (hi - lo) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double mid = lo + (k + 0.5) * h;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            sum += weights[j] * ((*this)(mid - 0.5 * h * nodes[j]) + (*this)(mid + 0.5 * h * nodes[j]));
        }
    }
    return 0.5 * h * sum;
}

void Diffusivity::require_positive(const SectorGeometry& geometry) const {
    const double m = geometry.max_slope();
    const int samples = 2001;
    for (int i = 0; i < samples; ++i) {
        const double p = -m + 2.0 * m * i / (samples - 1);
        const double v = (*this)(p);
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << "diffusivity not positive at p=" << p << " (a=" << v << ")";
            throw PreconditionError(os.str());
        }
    }
}

std::string Diffusivity::family_name() const {
    switch (family_) {
        case Family::constant: return "constant";
        case Family::curvature: return "curvature";
        case Family::polynomial: return "polynomial";
        case Family::tabulated: return "tabulated";
    }
    return "?";
}

}  // namespace wedge
