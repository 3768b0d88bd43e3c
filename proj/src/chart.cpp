#include "wedge/chart.hpp"

#include <cmath>
#include <sstream>

#include "wedge/error.hpp"
#include "wedge/numerics.hpp"

namespace wedge {

ChartId ChartId::v(double n) {
    if (!(n >= 1.0)) throw PreconditionError("v chart requires n >= 1");
    ChartId c{ChartKind::v};
    c.n = n;
    return c;
}

ChartId ChartId::w(double T) {
    if (!(T > 0.0)) throw PreconditionError("w chart requires a positive horizon");
    ChartId c{ChartKind::w};
    c.T = T;
    return c;
}

std::string ChartId::name() const {
    switch (kind) {
        case ChartKind::omega: return "omega";
        case ChartKind::v: return "v";
        case ChartKind::w: return "w";
        case ChartKind::r: return "r";
    }
    return "?";
}

ChartKind chart_kind_from_string(const std::string& text) {
    if (text == "omega") return ChartKind::omega;
    if (text == "v") return ChartKind::v;
    if (text == "w") return ChartKind::w;
    if (text == "r") return ChartKind::r;
    throw ConfigError("unknown chart '" + text + "' (expected omega, v, w or r)");
}

double chart_time(const ChartId& chart, double s) {
    switch (chart.kind) {
        case ChartKind::omega:
        case ChartKind::r: return s;
        case ChartKind::v: return std::isinf(chart.n) ? std::exp(2 * s) : std::exp(2 * s) - 1.0 / chart.n;
        case ChartKind::w: return chart.T - std::exp(-2 * s);
    }
    return s;
}

double chart_s(const ChartId& chart, double t) {
    switch (chart.kind) {
        case ChartKind::omega:
        case ChartKind::r: return t;
        case ChartKind::v: {
            const double arg = std::isinf(chart.n) ? t : t + 1.0 / chart.n;
            if (!(arg > 0.0)) throw PreconditionError("time outside the v chart window");
            return 0.5 * std::log(arg);
        }
        case ChartKind::w:
            if (!(t < chart.T)) throw PreconditionError("time outside the w chart window (t >= T)");
            return -0.5 * std::log(chart.T - t);
    }
    return t;
}

double chart_radius(const ChartId& chart, double q, double s) {
    switch (chart.kind) {
        case ChartKind::omega: return std::exp(q);
        case ChartKind::v: return std::exp(s + q);
        case ChartKind::w: return std::exp(-s - q);
        case ChartKind::r: return q;
    }
    return q;
}

double chart_unknown(const ChartId& chart, double radius, double s) {
    switch (chart.kind) {
        case ChartKind::omega: return std::log(radius);
        case ChartKind::v: return std::log(radius) - s;
        case ChartKind::w: return -std::log(radius) - s;
        case ChartKind::r: return radius;
    }
    return radius;
}

ChartPoint to_chart(const ChartId& chart, double x, double y, double t) {
    const double r2 = x * x + y * y;
    if (!(r2 > 0.0)) throw PreconditionError("the origin has no chart representation");
    ChartPoint p;
    p.theta = std::atan2(x, y);
    p.s = chart_s(chart, t);
    switch (chart.kind) {
        case ChartKind::omega: p.rho = 0.5 * std::log(r2); break;
        case ChartKind::v:
            p.rho = std::isinf(chart.n) ? 0.5 * std::log(r2 / t)
                                        : 0.5 * std::log(chart.n * r2 / (chart.n * t + 1.0));
            break;
        case ChartKind::w: p.rho = -0.5 * std::log(r2 / (chart.T - t)); break;
        case ChartKind::r: p.rho = std::sqrt(r2); break;
    }
    return p;
}

PhysicalPoint from_chart(const ChartId& chart, const ChartPoint& p) {
    const double R = chart_radius(chart, p.rho, p.s);
    return {R * std::sin(p.theta), R * std::cos(p.theta), chart_time(chart, p.s)};
}

double chart_denominator(const ChartId& chart, double theta, double q, double q_theta) {
    const double c = std::cos(theta), sn = std::sin(theta);
    switch (chart.kind) {
        case ChartKind::omega:
        case ChartKind::v: return c + q_theta * sn;
        case ChartKind::w: return c - q_theta * sn;
        case ChartKind::r: return c + q_theta / q * sn;
    }
    return 0.0;
}

namespace {

void require_floor(double d, double floor, double theta) {
    if (!(d > floor)) {
        std::ostringstream os;
        os << "chart denominator " << d << " below floor " << floor << " at theta=" << theta
           << " (gradient bound lost)";
        throw ChartFoldError(os.str());
    }
}

}  // namespace

Derivatives convert_derivatives(const ChartId& chart, double theta, double q, double q_theta,
                                double q_tt, double q_s, double s, double floor) {
    const double c = std::cos(theta), sn = std::sin(theta);
    Derivatives d;
    switch (chart.kind) {
        case ChartKind::omega: {
            const double D = c + q_theta * sn;
            require_floor(D, floor, theta);
            d.ux = (q_theta * c - sn) / D;
            d.uxx = (q_tt - q_theta * q_theta - 1.0) / (std::exp(q) * D * D * D);
            d.ut = std::exp(q) * q_s / D;
            break;
        }
        case ChartKind::v: {
            const double D = c + q_theta * sn;
            require_floor(D, floor, theta);
            d.ux = (q_theta * c - sn) / D;
            d.uxx = (q_tt - q_theta * q_theta - 1.0) / (std::exp(s + q) * D * D * D);
            d.ut = std::exp(q - s) * (1.0 + q_s) / (2.0 * D);
            break;
        }
        case ChartKind::w: {
            const double Dn = q_theta * sn - c;  // = -denominator
            require_floor(-Dn, floor, theta);
            d.ux = (q_theta * c + sn) / Dn;
            d.uxx = std::exp(s + q) * (q_tt + q_theta * q_theta + 1.0) / (Dn * Dn * Dn);
            d.ut = std::exp(s - q) * (1.0 + q_s) / (2.0 * Dn);
            break;
        }
        case ChartKind::r: {
            const double Dr = q_theta * sn + q * c;
            require_floor(Dr / q, floor, theta);
            d.ux = (q_theta * c - q * sn) / Dr;
            d.uxx = (q * q_tt - 2 * q_theta * q_theta - q * q) / (Dr * Dr * Dr);
            d.ut = q * q_s / Dr;
            break;
        }
    }
    return d;
}

PdeCoefficients pde_coefficients(const ChartId& chart, double theta, double q, double q_theta,
                                 double s, const Diffusivity& a) {
    (void)s;
    const double c = std::cos(theta), sn = std::sin(theta);
    PdeCoefficients k;
    switch (chart.kind) {
        case ChartKind::omega: {
            const double D = c + q_theta * sn;
            const double p = (q_theta * c - sn) / D;
            k.denominator = D;
            k.A = a(p) / (std::exp(2 * q) * D * D);
            k.B = -k.A * (q_theta * q_theta + 1.0);
            break;
        }
        case ChartKind::v: {
            const double D = c + q_theta * sn;
            const double p = (q_theta * c - sn) / D;
            k.denominator = D;
            k.A = 2.0 * a(p) / (std::exp(2 * q) * D * D);
            k.B = -k.A * (q_theta * q_theta + 1.0) - 1.0;
            break;
        }
        case ChartKind::w: {
            const double D = c - q_theta * sn;
            const double p = (q_theta * c + sn) / (q_theta * sn - c);
            k.denominator = D;
            k.A = 2.0 * std::exp(2 * q) * a(p) / (D * D);
            k.B = k.A * (q_theta * q_theta + 1.0) - 1.0;
            break;
        }
        case ChartKind::r: {
            const double Dr = q_theta * sn + q * c;
            const double p = (q_theta * c - q * sn) / Dr;
            k.denominator = Dr / q;
            const double ap = a(p);
            k.A = ap / (Dr * Dr);
            k.B = -ap * (2 * q_theta * q_theta + q * q) / (q * Dr * Dr);
            break;
        }
    }
    return k;
}

double boundary_transfer(const ChartId& chart, int side, double s, double q, const LawPair& laws,
                         const SectorGeometry& geometry) {
    const double th = geometry.theta0();
    const double R = chart_radius(chart, q, s);
    const double k = laws[side](chart_time(chart, s), R * std::cos(th));
    const double den = std::cos(th) - k * std::sin(th);
    if (!(den > 0.0)) {
        std::ostringstream os;
        os << "contact slope " << k << " makes the transfer denominator non-positive";
        throw LawRangeError(os.str());
    }
    const double h = (std::sin(th) + k * std::cos(th)) / den;
    return chart.kind == ChartKind::r ? h * R : h;
}

double boundary_slope(const ChartId& chart, int side, double s, double q, const LawPair& laws,
                      const SectorGeometry& geometry) {
    const double h = boundary_transfer(chart, side, s, q, laws, geometry);
    const double sign = chart.kind == ChartKind::w ? -1.0 : 1.0;
    return side == 1 ? -sign * h : sign * h;
}

double RecoveredSolution::value(double xq) const {
    return interpolant(xq);
}

std::vector<double> theta_grid(const SectorGeometry& geometry, std::size_t n) {
    return num::linspace(-geometry.theta0(), geometry.theta0(), n);
}

std::vector<double> theta_derivative(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2 * h);
    d[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h);
    d[n - 1] = (3 * v[n - 1] - 4 * v[n - 2] + v[n - 3]) / (2 * h);
    return d;
}

RecoveredSolution recover_solution(const ChartId& chart, const std::vector<double>& theta,
                                   const std::vector<double>& values, double s,
                                   std::size_t points) {
    const std::size_t n = theta.size();
    if (n < 3 || values.size() != n) throw PreconditionError("recovery needs matching grids");
    RecoveredSolution out;
    out.t = chart_time(chart, s);
    out.x_nodes.resize(n);
    out.u_nodes.resize(n);
    out.ux_nodes.resize(n);
    const double h = theta[1] - theta[0];
    const auto qt = theta_derivative(values, h);
    for (std::size_t i = 0; i < n; ++i) {
        const double R = chart_radius(chart, values[i], s);
        out.x_nodes[i] = R * std::sin(theta[i]);
        out.u_nodes[i] = R * std::cos(theta[i]);
        if (i > 0 && !(out.x_nodes[i] > out.x_nodes[i - 1])) {
            std::ostringstream os;
            os << "recovered abscissae not increasing at theta=" << theta[i] << " (chart fold)";
            throw ChartFoldError(os.str());
        }
        const double c = std::cos(theta[i]), sn = std::sin(theta[i]);
        switch (chart.kind) {
            case ChartKind::omega:
            case ChartKind::v: out.ux_nodes[i] = (qt[i] * c - sn) / (c + qt[i] * sn); break;
            case ChartKind::w: out.ux_nodes[i] = (qt[i] * c + sn) / (qt[i] * sn - c); break;
            case ChartKind::r:
                out.ux_nodes[i] = (qt[i] * c - values[i] * sn) / (qt[i] * sn + values[i] * c);
                break;
        }
    }
    out.xi1 = -out.x_nodes.front();
    out.xi2 = out.x_nodes.back();
    const std::size_t m = points == 0 ? n : points;
    out.x = num::linspace(-out.xi1, out.xi2, m);
    out.interpolant = num::Pchip(out.x_nodes, out.u_nodes);
    const auto& interp = out.interpolant;
    out.u.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.u[i] = interp(out.x[i]);
    return out;
}

}  // namespace wedge
