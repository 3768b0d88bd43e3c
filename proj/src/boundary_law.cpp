#include "wedge/boundary_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wedge/error.hpp"
#include "wedge/numerics.hpp"

namespace wedge {

double PeriodicShape::operator()(double zeta, double tau) const {
    double v = mean;
    for (const auto& m : modes) {
        v += m.amplitude * std::sin(2.0 * num::kPi * (m.zeta_freq * zeta + m.tau_freq * tau) + m.phase);
    }
    return v;
}

bool PeriodicShape::depends_on_tau() const {
    return std::any_of(modes.begin(), modes.end(),
                       [](const Mode& m) { return m.tau_freq != 0 && m.amplitude != 0.0; });
}

bool PeriodicShape::is_constant() const {
    return std::all_of(modes.begin(), modes.end(), [](const Mode& m) {
        return m.amplitude == 0.0 || (m.zeta_freq == 0 && m.tau_freq == 0);
    });
}

std::pair<double, double> PeriodicShape::range() const {
    if (is_constant()) {
        const double v = (*this)(0.0, 0.0);
        return {v, v};
    }
    double lo = 1e300, hi = -1e300;
    const int nz = 4096;
    const int nt = depends_on_tau() ? 512 : 1;
    const int nzz = depends_on_tau() ? 512 : nz;
    for (int j = 0; j < nt; ++j) {
        for (int i = 0; i < nzz; ++i) {
            const double v = (*this)(static_cast<double>(i) / nzz, static_cast<double>(j) / nt);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    return {lo, hi};
}

std::string to_string(LawKind kind) {
    switch (kind) {
        case LawKind::constant: return "constant";
        case LawKind::expanding: return "expanding";
        case LawKind::shrinking: return "shrinking";
        case LawKind::autonomous: return "autonomous";
    }
    return "?";
}

LawKind law_kind_from_string(const std::string& text) {
    if (text == "constant") return LawKind::constant;
    if (text == "expanding") return LawKind::expanding;
    if (text == "shrinking") return LawKind::shrinking;
    if (text == "autonomous") return LawKind::autonomous;
    throw ConfigError("unknown law kind '" + text + "'");
}

BoundaryLaw BoundaryLaw::constant(int side, double gamma) {
    if (side != 1 && side != 2) throw PreconditionError("law side must be 1 or 2");
    BoundaryLaw law;
    law.side_ = side;
    law.kind_ = LawKind::constant;
    law.shape_.mean = gamma;
    law.min_ = law.max_ = gamma;
    return law;
}

namespace {

double frac(double x) { return x - std::floor(x); }

}  // namespace

double BoundaryLaw::operator()(double t, double u) const {
    if (kind_ == LawKind::constant) return shape_.mean;
    const double log_b = std::log(b_);
    const double zeta = frac(std::log(std::max(u, clamp_floor_)) / log_b);
    double tau = 0.0;
    if (kind_ == LawKind::expanding) {
        tau = frac(std::log(std::max(t, clamp_floor_)) / (2.0 * log_b));
    } else if (kind_ == LawKind::shrinking) {
        tau = frac(std::log(std::max(horizon_ - t, clamp_floor_)) / (2.0 * log_b));
    }
    return shape_(zeta, tau);
}

bool BoundaryLaw::clamps(double t, double u) const {
    if (kind_ == LawKind::constant) return false;
    if (u < clamp_floor_) return true;
    if (kind_ == LawKind::expanding) return t < clamp_floor_;
    if (kind_ == LawKind::shrinking) return horizon_ - t < clamp_floor_;
    return false;
}

bool BoundaryLaw::time_dependent() const {
    return (kind_ == LawKind::expanding || kind_ == LawKind::shrinking) && shape_.depends_on_tau();
}

BoundaryLaw make_discrete_similar_law(const PeriodicShape& shape, double b, int side, LawKind mode,
                                      const SectorGeometry& geometry, double horizon,
                                      double clamp_floor) {
    if (side != 1 && side != 2) throw PreconditionError("law side must be 1 or 2");
    if (!(b > 1.0)) throw PreconditionError("similarity ratio b must exceed 1");
    if (mode == LawKind::shrinking && !(horizon > 0.0))
        throw PreconditionError("shrinking law needs a positive horizon T");
    if (!(clamp_floor > 0.0)) throw PreconditionError("clamp floor must be positive");
    const auto [lo, hi] = shape.range();
    const double m = geometry.max_slope();
    if (!(lo > -m && hi < m)) {
        std::ostringstream os;
        os << "law shape range [" << lo << ", " << hi << "] leaves (" << -m << ", " << m << ")";
        throw LawRangeError(os.str());
    }
    BoundaryLaw law;
    law.side_ = side;
    law.kind_ = shape.is_constant() ? LawKind::constant : mode;
    law.shape_ = shape;
    if (law.kind_ == LawKind::constant) {
        law.shape_.mean = lo;
        law.shape_.modes.clear();
    }
    law.b_ = b;
    law.horizon_ = horizon;
    law.clamp_floor_ = clamp_floor;
    law.min_ = lo;
    law.max_ = hi;
    return law;
}

ValidationReport validate_boundary_law(const BoundaryLaw& law, const SectorGeometry& geometry,
                                       int lattice_size, double lattice_max) {
    ValidationReport rep;
    const double floor = law.clamp_floor();
    const double b = law.ratio();
    const double T = law.horizon();
    const auto kind = law.kind();

    // lattice in the time-like variable and in u
    std::vector<double> t_axis, u_axis;
    if (kind == LawKind::shrinking) {
        // t = T - tau with tau log-spaced; tau below 1e-4 T loses digits in T - t
        for (double tau : num::logspace(1e-4 * T, T, lattice_size)) t_axis.push_back(T - tau);
        u_axis = num::logspace(b * floor, lattice_max, lattice_size);
    } else {
        t_axis = num::logspace(floor, lattice_max, lattice_size);
        u_axis = num::logspace(floor, lattice_max, lattice_size);
    }

    double kmin = 1e300, kmax = -1e300, defect = 0.0;
    for (double t : t_axis) {
        for (double u : u_axis) {
            ++rep.lattice_points;
            const double k = law(t, u);
            kmin = std::min(kmin, k);
            kmax = std::max(kmax, k);
            double other = k;
            bool hit = law.clamps(t, u);
            switch (kind) {
                case LawKind::constant:
                    break;
                case LawKind::expanding:
                    other = law(b * b * t, b * u);
                    hit = hit || law.clamps(b * b * t, b * u);
                    break;
                case LawKind::shrinking: {
                    const double ts = t / (b * b) + (1.0 - 1.0 / (b * b)) * T;
                    other = law(ts, u / b);
                    hit = hit || law.clamps(ts, u / b);
                    break;
                }
                case LawKind::autonomous:
                    other = law(b * b * t, b * u);
                    defect = std::max(defect, std::abs(k - law(0.5 * t, u)));
                    hit = hit || law.clamps(0.0, b * u);
                    break;
            }
            defect = std::max(defect, std::abs(k - other));
            if (hit) ++rep.clamp_hits;
        }
    }
    rep.similarity_defect = defect;
    rep.lattice_min = kmin;
    rep.lattice_max = kmax;
    rep.similarity_ok = defect < 1e-12;
    const double tb = geometry.tan_beta();
    const double m = geometry.max_slope();
    rep.below_tan_beta = kmax < tb && kmin > -tb;
    rep.inside_margin = kmax < m && kmin > -m;
    rep.clamp_warning = rep.clamp_hits > rep.lattice_points / 100;
    if (!rep.similarity_ok) {
        std::ostringstream os;
        os << "similarity defect " << defect << " exceeds 1e-12";
        rep.messages.push_back(os.str());
    }
    if (!rep.below_tan_beta) rep.messages.push_back("law violates |k| < tan(beta)");
    if (!rep.inside_margin) rep.messages.push_back("law leaves the sigma margin");
    if (rep.clamp_warning) rep.messages.push_back("law ill-conditioned near the origin (clamp floor hit)");
    return rep;
}

}  // namespace wedge
