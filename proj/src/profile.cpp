#include "wedge/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wedge/error.hpp"
#include "wedge/numerics.hpp"

namespace wedge {

std::string to_string(ProfileKind kind) {
    return kind == ProfileKind::expanding ? "expanding" : "shrinking";
}

namespace {

struct Shot {
    bool valid = false;
    double left = 0.0, right = 0.0;
    double slope_left = 0.0, slope_right = 0.0;  // f'(-left), f'(right)
};

class Shooter {
public:
    Shooter(ProfileKind kind, const Diffusivity& a, double tan_beta, const ProfileOptions& opt)
        : sign_(kind == ProfileKind::expanding ? 1.0 : -1.0), a_(a), tb_(tan_beta), opt_(opt) {}

    // Right half on zeta >= 0. The left half is the same equation for
    // g(zeta) = f(-zeta) with a reflected: g'' = sign (g - zeta g') / a(-g').
    ode::Rhs2 rhs(double reflect) const {
        return [this, reflect](double zeta, const ode::State2& y) {
            return ode::State2{y[1], sign_ * (y[0] - zeta * y[1]) / a_(reflect * y[1])};
        };
    }

    Shot operator()(double value0, double slope0) const {
        Shot shot;
        if (!(value0 > 0.0)) return shot;
        auto event = [this](double zeta, const ode::State2& y) { return y[0] - zeta * tb_; };
        auto abort = [](double, const ode::State2& y) { return std::abs(y[1]) > 1e3; };
        const auto r = ode::integrate_to_event(rhs(1.0), 0.0, {value0, slope0}, event, opt_.z_max,
                                               opt_.ode, abort);
        if (!r.found) return shot;
        const auto l = ode::integrate_to_event(rhs(-1.0), 0.0, {value0, -slope0}, event, opt_.z_max,
                                               opt_.ode, abort);
        if (!l.found) return shot;
        shot.valid = r.z > 0.0 && l.z > 0.0;
        shot.right = r.z;
        shot.slope_right = r.y[1];
        shot.left = l.z;
        shot.slope_left = -l.y[1];
        return shot;
    }

    ode::Rhs2 right_rhs() const { return rhs(1.0); }
    ode::Rhs2 left_rhs() const { return rhs(-1.0); }

private:
    double sign_;
    const Diffusivity& a_;
    double tb_;
    const ProfileOptions& opt_;
};

struct NewtonResult {
    bool converged = false;
    double v = 0.0, s = 0.0, norm = 0.0;
    Shot shot;
};

std::array<double, 2> residual(const Shot& sh, double g1, double g2) {
    return {sh.slope_left + g1, sh.slope_right - g2};
}

double inf_norm(const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); }

NewtonResult newton(const Shooter& shoot, double v, double s, double g1, double g2,
                    const ProfileOptions& opt) {
    NewtonResult out;
    Shot sh = shoot(v, s);
    if (!sh.valid) return out;
    auto r = residual(sh, g1, g2);
    double norm = inf_norm(r);
    for (int it = 0; it < opt.max_newton; ++it) {
        if (norm < opt.shoot_tol) break;
        const double hv = 1e-7 * (1.0 + std::abs(v));
        const double hs = 1e-7 * (1.0 + std::abs(s));
        const Shot sv = shoot(v + hv, s);
        const Shot ss = shoot(v, s + hs);
        if (!sv.valid || !ss.valid) return out;
        const auto rv = residual(sv, g1, g2);
        const auto rs = residual(ss, g1, g2);
        const double j00 = (rv[0] - r[0]) / hv, j10 = (rv[1] - r[1]) / hv;
        const double j01 = (rs[0] - r[0]) / hs, j11 = (rs[1] - r[1]) / hs;
        const double det = j00 * j11 - j01 * j10;
        if (!std::isfinite(det) || std::abs(det) < 1e-300) return out;
        const double dv = -(j11 * r[0] - j01 * r[1]) / det;
        const double ds = -(-j10 * r[0] + j00 * r[1]) / det;
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k, lambda *= 0.5) {
            const double vn = v + lambda * dv, sn = s + lambda * ds;
            const Shot trial = shoot(vn, sn);
            if (!trial.valid) continue;
            const auto rn = residual(trial, g1, g2);
            const double nn = inf_norm(rn);
            if (nn < norm || nn < opt.shoot_tol) {
                v = vn;
                s = sn;
                sh = trial;
                r = rn;
                norm = nn;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    out.converged = norm < opt.shoot_tol;
    out.v = v;
    out.s = s;
    out.norm = norm;
    out.shot = sh;
    return out;
}

struct Start {
    double v, s, norm;
};

std::vector<Start> rank_starts(const Shooter& shoot, double g1, double g2) {
    std::vector<Start> starts;
    for (int i = 1; i <= 20; ++i) {
        for (int j = -5; j <= 5; ++j) {
            const double v = 0.1 * i, s = 0.1 * j;
            const Shot sh = shoot(v, s);
            if (sh.valid) starts.push_back({v, s, inf_norm(residual(sh, g1, g2))});
        }
    }
    std::stable_sort(starts.begin(), starts.end(),
                     [](const Start& a, const Start& b) { return a.norm < b.norm; });
    return starts;
}

Profile assemble(ProfileKind kind, const Diffusivity& a, double g1, double g2, double tb,
                 const NewtonResult& sol, const Shooter& shoot, const ProfileOptions& opt) {
    Profile p;
    p.kind = kind;
    p.a = a;
    p.gamma1 = g1;
    p.gamma2 = g2;
    p.tan_beta = tb;
    p.left = sol.shot.left;
    p.right = sol.shot.right;
    p.value0 = sol.v;
    p.slope0 = sol.s;
    p.residual = sol.norm;
    p.z = num::linspace(-p.left, p.right, opt.samples);
    p.value.resize(p.z.size());
    p.slope.resize(p.z.size());
    std::vector<double> zr, zl;
    std::vector<std::size_t> ir, il;
    for (std::size_t i = 0; i < p.z.size(); ++i) {
        if (p.z[i] >= 0.0) {
            zr.push_back(p.z[i]);
            ir.push_back(i);
        } else {
            zl.push_back(-p.z[i]);
            il.push_back(i);
        }
    }
    std::reverse(zl.begin(), zl.end());
    std::reverse(il.begin(), il.end());
    const auto yr = ode::integrate_at(shoot.right_rhs(), 0.0, {sol.v, sol.s}, zr, opt.ode);
    const auto yl = ode::integrate_at(shoot.left_rhs(), 0.0, {sol.v, -sol.s}, zl, opt.ode);
    for (std::size_t k = 0; k < ir.size(); ++k) {
        p.value[ir[k]] = yr[k][0];
        p.slope[ir[k]] = yr[k][1];
    }
    for (std::size_t k = 0; k < il.size(); ++k) {
        p.value[il[k]] = yl[k][0];
        p.slope[il[k]] = -yl[k][1];
    }
    p.value.front() = p.left * tb;
    p.value.back() = p.right * tb;
    p.slope.front() = sol.shot.slope_left;
    p.slope.back() = sol.shot.slope_right;
    const auto [mn, mx] = std::minmax_element(p.value.begin(), p.value.end());
    p.min_value = *mn;
    p.max_value = *mx;
    return p;
}

void check_gammas(const Diffusivity& a, double g1, double g2, const SectorGeometry& geometry) {
    const double m = geometry.max_slope();
    if (std::abs(g1) > m || std::abs(g2) > m) {
        std::ostringstream os;
        os << "contact slopes must satisfy |gamma| <= tan(beta) - sigma = " << m;
        throw PreconditionError(os.str());
    }
    a.require_positive(geometry);
}

[[noreturn]] void fail(const char* what, double g1, double g2, double best) {
    std::ostringstream os;
    os << what << ": shooting did not converge for gamma = (" << g1 << ", " << g2
       << "), best residual " << best;
    throw ConvergenceError(os.str());
}

}  // namespace

Profile solve_phi(const Diffusivity& a, double gamma1, double gamma2, const SectorGeometry& geometry,
                  const ProfileOptions& options) {
    if (!(gamma1 + gamma2 > 0.0)) throw PreconditionError("solve_phi requires gamma1 + gamma2 > 0");
    check_gammas(a, gamma1, gamma2, geometry);
    const Shooter shoot(ProfileKind::expanding, a, geometry.tan_beta(), options);
    const auto starts = rank_starts(shoot, gamma1, gamma2);
    double best = starts.empty() ? INFINITY : starts.front().norm;
    for (std::size_t k = 0; k < std::min<std::size_t>(starts.size(), 12); ++k) {
        const auto sol = newton(shoot, starts[k].v, starts[k].s, gamma1, gamma2, options);
        if (sol.converged) {
            auto p = assemble(ProfileKind::expanding, a, gamma1, gamma2, geometry.tan_beta(), sol,
                              shoot, options);
            p.alternatives.push_back({sol.v, sol.s, p.left, p.right, sol.norm});
            return p;
        }
        best = std::min(best, sol.norm > 0.0 ? sol.norm : best);
    }
    fail("solve_phi", gamma1, gamma2, best);
}

Profile solve_psi(const Diffusivity& a, double gamma1, double gamma2, const SectorGeometry& geometry,
                  const ProfileOptions& options) {
    if (!(gamma1 + gamma2 < 0.0)) throw PreconditionError("solve_psi requires gamma1 + gamma2 < 0");
    check_gammas(a, gamma1, gamma2, geometry);
    const Shooter shoot(ProfileKind::shrinking, a, geometry.tan_beta(), options);
    const auto starts = rank_starts(shoot, gamma1, gamma2);
    double best = starts.empty() ? INFINITY : starts.front().norm;
    std::vector<NewtonResult> found;
    for (std::size_t k = 0; k < std::min<std::size_t>(starts.size(), 20); ++k) {
        const auto sol = newton(shoot, starts[k].v, starts[k].s, gamma1, gamma2, options);
        if (!sol.converged) {
            if (sol.norm > 0.0) best = std::min(best, sol.norm);
            continue;
        }
        const bool seen = std::any_of(found.begin(), found.end(), [&](const NewtonResult& f) {
            return std::abs(f.shot.left - sol.shot.left) < 1e-6 * (1 + f.shot.left) &&
                   std::abs(f.shot.right - sol.shot.right) < 1e-6 * (1 + f.shot.right);
        });
        if (!seen) found.push_back(sol);
    }
    if (found.empty()) fail("solve_psi", gamma1, gamma2, best);
    std::stable_sort(found.begin(), found.end(), [](const NewtonResult& x, const NewtonResult& y) {
        return x.shot.left + x.shot.right < y.shot.left + y.shot.right;
    });
    auto p = assemble(ProfileKind::shrinking, a, gamma1, gamma2, geometry.tan_beta(), found.front(),
                      shoot, options);
    for (const auto& f : found) p.alternatives.push_back({f.v, f.s, f.shot.left, f.shot.right, f.norm});
    return p;
}

double Profile::value_at(double zq) const { return num::hermite(z, value, slope, zq).value; }

double Profile::slope_at(double zq) const { return num::hermite(z, value, slope, zq).slope; }

double Profile::second_derivative_at(double zq) const {
    const auto h = num::hermite(z, value, slope, zq);
    const double sign = kind == ProfileKind::expanding ? 1.0 : -1.0;
    return sign * (h.value - zq * h.slope) / a(h.slope);
}

double Profile::ode_residual() const {
    const double sign = kind == ProfileKind::expanding ? 1.0 : -1.0;
    const std::size_t n = z.size();
    const double h = z[1] - z[0];
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        // fourth-order differences of the sampled slopes
        double fpp;
        if (i == 1) {
            fpp = (-3 * slope[0] - 10 * slope[1] + 18 * slope[2] - 6 * slope[3] + slope[4]) / (12 * h);
        } else if (i + 2 == n) {
            fpp = (3 * slope[n - 1] + 10 * slope[n - 2] - 18 * slope[n - 3] + 6 * slope[n - 4] -
                   slope[n - 5]) / (12 * h);
        } else {
            fpp = (-slope[i + 2] + 8 * slope[i + 1] - 8 * slope[i - 1] + slope[i - 2]) / (12 * h);
        }
        worst = std::max(worst, std::abs(a(slope[i]) * fpp - sign * (value[i] - z[i] * slope[i])));
    }
    return worst;
}

namespace {

double scale_length(const Profile& p, double t, double shift) {
    const double tau = p.kind == ProfileKind::expanding ? t + shift : shift - t;
    if (!(tau > 0.0)) throw PreconditionError("classical solution evaluated outside its time window");
    return std::sqrt(2.0 * tau);
}

}  // namespace

std::optional<double> classical_eval(const Profile& profile, double x, double t, double shift) {
    const double L = scale_length(profile, t, shift);
    const double zq = x / L;
    const double slack = 1e-14 * (1.0 + std::abs(zq));
    if (zq < -profile.left - slack || zq > profile.right + slack) return std::nullopt;
    return L * profile.value_at(std::clamp(zq, -profile.left, profile.right));
}

std::pair<double, double> classical_support(const Profile& profile, double t, double shift) {
    const double L = scale_length(profile, t, shift);
    return {L * profile.left, L * profile.right};
}

InitialDatum classical_datum(const Profile& profile, double tau, std::size_t points) {
    if (!(tau > 0.0)) throw PreconditionError("classical datum needs a positive scale");
    const double L = std::sqrt(2.0 * tau);
    auto d = InitialDatum::sample(
        L * profile.left, L * profile.right, points,
        [&](double x) { return L * profile.value_at(x / L); },
        [&](double x) { return profile.slope_at(x / L); });
    auto u = d.u();
    auto ux = d.ux();
    u.front() = L * profile.left * profile.tan_beta;
    u.back() = L * profile.right * profile.tan_beta;
    ux.front() = profile.slope.front();
    ux.back() = profile.slope.back();
    return InitialDatum(d.xi01(), d.xi02(), std::move(u), std::move(ux));
}

}  // namespace wedge
