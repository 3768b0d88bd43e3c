#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wedge/chart.hpp"
#include "wedge/error.hpp"

using namespace wedge;

namespace {
const SectorGeometry kGeo(oracle::pi / 4, 0.5);
const std::vector<ChartId> kCharts{ChartId::omega(), ChartId::v(1.0), ChartId::v(), ChartId::w(1.0), ChartId::r()};
LawPair constant_pair(double g) { return {BoundaryLaw::constant(1, g), BoundaryLaw::constant(2, g)}; }

// chart values representing the graph of u at chart time s (oracle bisection)
std::vector<double> represent(const ChartId& chart, const std::vector<double>& theta, double s,
                              const std::function<double(double)>& u) {
    std::vector<double> q;
    for (double th : theta) {
        const double R = oracle::bisect([&](double R) { return R * std::cos(th) - u(R * std::sin(th)); }, 1e-6, 10.0);
        q.push_back(chart_unknown(chart, R, s));
    }
    return q;
}
}  // namespace

TEST_SUITE("transforms") {
    TEST_CASE("chart examples") {
        for (const auto& ch : {ChartId::omega(), ChartId::v(1.0), ChartId::w(1.0)}) {
            const auto p = to_chart(ch, 0.0, 1.0, 0.0);
            CHECK(p.theta == doctest::Approx(0.0));
            CHECK(p.rho == doctest::Approx(0.0));
            CHECK(p.s == doctest::Approx(0.0));
        }
        const auto back = from_chart(ChartId::v(1.0), {0.0, 0.0, 0.0});
        CHECK(back.x == doctest::Approx(0.0));
        CHECK(back.y == doctest::Approx(1.0));
        CHECK(back.t == doctest::Approx(0.0));
        const auto ray = from_chart(ChartId::w(1.0), {kGeo.theta0(), 0.37, 0.81});
        CHECK(ray.y == doctest::Approx(ray.x * kGeo.tan_beta()).epsilon(1e-14));
        CHECK(chart_time(ChartId::v(), 0.5) == doctest::Approx(std::exp(1.0)));
        CHECK(chart_s(ChartId::w(2.0), chart_time(ChartId::w(2.0), 0.3)) == doctest::Approx(0.3));
    }

    TEST_CASE("random round trips") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (const auto& ch : kCharts) {
            double worst = 0;
            for (int i = 0; i < 1000; ++i) {
                const double th = kGeo.theta0() * (2 * U(rng) - 1);
                const double R = std::exp(-3 + 6 * U(rng));
                const double t = ch.kind == ChartKind::w ? 0.99 * U(rng) : 0.05 + 2 * U(rng);
                const auto p = to_chart(ch, R * std::sin(th), R * std::cos(th), t);
                const auto b = from_chart(ch, p);
                worst = std::max({worst, std::abs(b.x - R * std::sin(th)) / R, std::abs(b.y - R * std::cos(th)) / R,
                                  std::abs(b.t - t)});
            }
            CHECK(worst < 1e-12);
        }
    }

    TEST_CASE("derivative conversion examples") {
        const auto d = convert_derivatives(ChartId::omega(), 0.0, 0.3, 0.0, 0.0, 0.0, 0.0);
        CHECK(d.ux == doctest::Approx(0.0));
        const double th = 0.3, v = 0.2, s = 0.1;
        const auto dv = convert_derivatives(ChartId::v(), th, v, 0.0, 0.0, 0.0, s);
        CHECK(dv.ux == doctest::Approx(-std::tan(th)).epsilon(1e-14));
        CHECK(dv.ut == doctest::Approx(std::exp(v - s) / 2 / std::cos(th)).epsilon(1e-13));
        CHECK_THROWS_AS(convert_derivatives(ChartId::omega(), 0.5, 0.0, -10.0, 0.0, 0.0, 0.0, 0.1), ChartFoldError);
    }

    TEST_CASE("chart PDE reproduces u_t = a(u_x) u_xx") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        const auto a = Diffusivity::curvature();
        for (const auto& ch : kCharts) {
            double worst = 0;
            for (int i = 0; i < 200; ++i) {
                const double th = 0.7 * kGeo.theta0() * U(rng);
                const double q = ch.kind == ChartKind::r ? 1.0 + 0.5 * U(rng) : 0.5 * U(rng);
                const double qt = 0.2 * U(rng), qtt = U(rng), s = 0.3 + 0.2 * U(rng);
                const auto c = pde_coefficients(ch, th, q, qt, s, a);
                const auto d = convert_derivatives(ch, th, q, qt, qtt, c.A * qtt + c.B, s);
                worst = std::max(worst, std::abs(d.ut - a(d.ux) * d.uxx) / (1 + std::abs(d.ut)));
            }
            CHECK(worst < 1e-12);
        }
    }

    TEST_CASE("transfer functions") {
        for (const auto& ch : kCharts) {
            const double q = ch.kind == ChartKind::r ? 0.8 : 0.1;
            const double scale = ch.kind == ChartKind::r ? q : 1.0;
            CHECK(boundary_transfer(ch, 2, 0.2, q, constant_pair(0.0), kGeo) ==
                  doctest::Approx(scale * std::tan(kGeo.theta0())));
            CHECK(boundary_transfer(ch, 1, 0.2, q, constant_pair(0.2), kGeo) == doctest::Approx(scale * 1.5));
        }
        // boundary slopes reproduce the contact laws in every chart
        const LawPair laws{BoundaryLaw::constant(1, 0.15), BoundaryLaw::constant(2, -0.1)};
        for (const auto& ch : kCharts) {
            const double q = ch.kind == ChartKind::r ? 0.9 : 0.2, s = 0.4;
            const double th0 = kGeo.theta0();
            const double left = boundary_slope(ch, 1, s, q, laws, kGeo);
            const double right = boundary_slope(ch, 2, s, q, laws, kGeo);
            CHECK(convert_derivatives(ch, -th0, q, left, 0.0, 0.0, s).ux == doctest::Approx(-0.15).epsilon(1e-13));
            CHECK(convert_derivatives(ch, th0, q, right, 0.0, 0.0, s).ux == doctest::Approx(-0.1).epsilon(1e-13));
        }
    }

    TEST_CASE("recovery of a circular arc and the endpoint formula") {
        const double rho = 0.3;
        auto arc_error = [&](int n) {
            const auto theta = theta_grid(kGeo, n);
            const std::vector<double> field(theta.size(), rho);
            const auto rec = recover_solution(ChartId::v(1.0), theta, field, 0.0, 401);
            double worst = 0;
            for (std::size_t i = 0; i < rec.x.size(); ++i)
                worst = std::max(worst, std::abs(rec.u[i] - std::sqrt(std::exp(2 * rho) - rec.x[i] * rec.x[i])));
            return worst;
        };
        const double coarse = arc_error(101), fine = arc_error(201);
        CHECK(fine < 1e-5);
        CHECK(coarse / fine > 3.5);
        const auto theta = theta_grid(kGeo, 101);
        const std::vector<double> field(theta.size(), rho);
        const double s = 0.7;
        const auto rec2 = recover_solution(ChartId::v(), theta, field, s);
        CHECK(rec2.xi2 == doctest::Approx(std::exp(s) * std::exp(rho) * std::sin(kGeo.theta0())).epsilon(1e-15));
        auto folded = field;
        for (std::size_t i = 0; i < folded.size(); ++i) folded[i] = 3.0 * std::cos(40.0 * theta[i]);
        CHECK_THROWS_AS(recover_solution(ChartId::omega(), theta, folded, 0.0), ChartFoldError);
    }

    TEST_CASE("represent then recover is second order") {
        auto u = [](double x) { return 1.2 - 0.3 * x * x + 0.05 * x * x * x; };
        std::vector<double> errors;
        for (std::size_t n : {51, 101, 201}) {
            const auto theta = theta_grid(kGeo, n);
            const auto q = represent(ChartId::v(), theta, 0.1, u);
            const auto rec = recover_solution(ChartId::v(), theta, q, 0.1);
            double worst = 0;
            for (int i = 0; i <= 997; ++i) {
                const double x = -rec.xi1 + (rec.xi1 + rec.xi2) * i / 997.0;
                worst = std::max(worst, std::abs(rec.value(x) - u(x)));
            }
            errors.push_back(worst);
        }
        CHECK(errors[0] / errors[1] > 3.5);
        CHECK(errors[1] / errors[2] > 3.5);
    }

    TEST_CASE("converted slope matches differences of the recovered graph") {
        auto field = [](double th) { return 0.1 * std::cos(th) + 0.05 * std::sin(2 * th); };
        auto dfield = [](double th) { return -0.1 * std::sin(th) + 0.1 * std::cos(2 * th); };
        std::vector<double> errors;
        for (std::size_t n : {41, 81, 161}) {
            const auto theta = theta_grid(kGeo, n);
            std::vector<double> q;
            for (double th : theta) q.push_back(field(th));
            const auto rec = recover_solution(ChartId::omega(), theta, q, 0.0);
            double worst = 0;
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double fd = (rec.u_nodes[i + 1] - rec.u_nodes[i - 1]) / (rec.x_nodes[i + 1] - rec.x_nodes[i - 1]);
                const auto d = convert_derivatives(ChartId::omega(), theta[i], q[i], dfield(theta[i]), 0.0, 0.0, 0.0);
                worst = std::max(worst, std::abs(fd - d.ux));
            }
            errors.push_back(worst);
        }
        CHECK(errors[0] / errors[1] > 3.5);
        CHECK(errors[1] / errors[2] > 3.5);
    }
}
