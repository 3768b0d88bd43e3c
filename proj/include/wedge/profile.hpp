#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wedge/diffusivity.hpp"
#include "wedge/geometry.hpp"
#include "wedge/initial_datum.hpp"
#include "wedge/ode.hpp"

namespace wedge {

enum class ProfileKind { expanding, shrinking };

std::string to_string(ProfileKind kind);

/// One converged shot: interior data at z = 0 and the two contact abscissae.
struct ShootingSolution {
    double value0 = 0.0;
    double slope0 = 0.0;
    double left = 0.0;   // p1 or q1
    double right = 0.0;  // p2 or q2
    double residual = 0.0;
};

/// Classical selfsimilar profile.
///
/// expanding:  a(f') f'' = f - z f'   (phi, gamma1 + gamma2 > 0)
/// shrinking:  a(f') f'' = z f' - f   (psi, gamma1 + gamma2 < 0)
///
/// on [-left, right] with f(-left) = left tan(beta), f(right) = right tan(beta),
/// f'(-left) = -gamma1, f'(right) = gamma2.
struct Profile {
    ProfileKind kind = ProfileKind::expanding;
    double gamma1 = 0.0, gamma2 = 0.0;
    double tan_beta = 1.0;
    double left = 0.0, right = 0.0;
    double value0 = 0.0, slope0 = 0.0;
    double residual = 0.0;
    std::vector<double> z, value, slope;
    double min_value = 0.0, max_value = 0.0;
    Diffusivity a = Diffusivity::constant(1.0);
    /// Every distinct solution found by the multistart (the returned one first).
    std::vector<ShootingSolution> alternatives;

    double value_at(double zq) const;
    double slope_at(double zq) const;
    /// Second derivative from the ODE itself.
    double second_derivative_at(double zq) const;
    bool contains(double zq) const { return zq >= -left && zq <= right; }
    /// max over interior samples of |a(f') f'' -/+ (f - z f')| using the
    /// fourth-order differences of the sampled slopes for f''.
    double ode_residual() const;
};

struct ProfileOptions {
    double shoot_tol = 1e-10;
    double z_max = 50.0;
    std::size_t samples = 2001;
    int max_newton = 60;
    ode::Tolerance ode{};
};

Profile solve_phi(const Diffusivity& a, double gamma1, double gamma2, const SectorGeometry& geometry,
                  const ProfileOptions& options = {});

Profile solve_psi(const Diffusivity& a, double gamma1, double gamma2, const SectorGeometry& geometry,
                  const ProfileOptions& options = {});

/// sqrt(2(t+c)) phi(x / sqrt(2(t+c))) for expanding profiles (shift = c), or
/// sqrt(2(T-t)) psi(x / sqrt(2(T-t))) for shrinking ones (shift = T).
/// Returns nullopt when x lies outside the free boundary.
std::optional<double> classical_eval(const Profile& profile, double x, double t, double shift);

/// Endpoint positions of the classical solution at time t: {zeta1, zeta2}.
std::pair<double, double> classical_support(const Profile& profile, double t, double shift);

/// The classical solution at scale tau (tau = t + c or T - t), i.e.
/// sqrt(2 tau) f(x / sqrt(2 tau)), sampled as an initial datum.
InitialDatum classical_datum(const Profile& profile, double tau, std::size_t points = 2001);

}  // namespace wedge
