#include "wedge/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "wedge/error.hpp"

namespace wedge::num {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + h * static_cast<double>(i);
    out.back() = b;
    return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
    auto e = linspace(std::log(a), std::log(b), n);
    for (auto& v : e) v = std::exp(v);
    if (n > 0) {
        e.front() = a;
        e.back() = b;
    }
    return e;
}

namespace {

std::size_t locate(std::span<const double> x, double xq) {
    // index i with x[i] <= xq <= x[i+1]
    if (xq <= x.front()) return 0;
    if (xq >= x.back()) return x.size() - 2;
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    return static_cast<std::size_t>(it - x.begin()) - 1;
}

}  // namespace

HermiteValue hermite(std::span<const double> x, std::span<const double> y,
                     std::span<const double> dy, double xq) {
    xq = std::clamp(xq, x.front(), x.back());
    const std::size_t i = locate(x, xq);
    const double h = x[i + 1] - x[i];
    const double t = (xq - x[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    const double value = h00 * y[i] + h10 * h * dy[i] + h01 * y[i + 1] + h11 * h * dy[i + 1];
    const double d00 = (6 * t2 - 6 * t) / h;
    const double d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h;
    const double d11 = 3 * t2 - 2 * t;
    const double slope = d00 * y[i] + d10 * dy[i] + d01 * y[i + 1] + d11 * dy[i + 1];
    return {value, slope};
}

std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2 * h[i] + h[i - 1];
            const double w2 = h[i] + 2 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double del0, double del1) {
        double s = ((2 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (s * del0 <= 0.0) {
            s = 0.0;
        } else if (del0 * del1 <= 0.0 && std::abs(s) > std::abs(3 * del0)) {
            s = 3 * del0;
        }
        return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size() || x_.size() < 2) throw Error("Pchip: need at least two points");
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        if (!(x_[i + 1] > x_[i])) throw ChartFoldError("Pchip: abscissae not strictly increasing");
    }
    d_ = pchip_slopes(x_, y_);
}

double Pchip::operator()(double xq) const { return hermite(x_, y_, d_, xq).value; }

double Pchip::derivative(double xq) const { return hermite(x_, y_, d_, xq).slope; }

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw Error("CubicSpline: need at least three points");
    std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        if (!(h0 > 0 && h1 > 0)) throw Error("CubicSpline: abscissae not strictly increasing");
        lo[i] = h0 / 6.0;
        di[i] = (h0 + h1) / 3.0;
        up[i] = h1 / 6.0;
        rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    }
    solve_tridiagonal(lo, di, up, rhs);
    m_ = rhs;
}

std::size_t CubicSpline::segment(double xq) const { return locate(x_, xq); }

double CubicSpline::operator()(double xq) const {
    const std::size_t i = segment(xq);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - xq) / h;
    const double b = (xq - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double xq) const {
    const std::size_t i = segment(xq);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - xq) / h;
    const double b = (xq - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           (-(3 * a * a - 1) * m_[i] + (3 * b * b - 1) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::second_derivative(double xq) const {
    const std::size_t i = segment(xq);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - xq) / h;
    const double b = (xq - x_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

double simpson(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (y[0] + y[1]);
    std::size_t last = n - 1;  // index of last point covered by Simpson panels
    double tail = 0.0;
    if ((n - 1) % 2 == 1) {
        // odd number of intervals: close the final interval with a cubic
        // (Simpson 3/8 on the last three intervals)
        if (n >= 4) {
            const std::size_t k = n - 4;
            tail = 3.0 * h / 8.0 * (y[k] + 3 * y[k + 1] + 3 * y[k + 2] + y[k + 3]);
            last = k;
        } else {
            tail = 0.5 * h * (y[n - 2] + y[n - 1]);
            last = n - 2;
        }
    }
    double s = 0.0;
    for (std::size_t i = 0; i + 2 <= last; i += 2) s += y[i] + 4 * y[i + 1] + y[i + 2];
    return s * h / 3.0 + tail;
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n, 0.0);
    double beta = diag[0];
    if (beta == 0.0) throw BlowUpError("tridiagonal solve: zero pivot");
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        c[i - 1] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i - 1];
        if (beta == 0.0) throw BlowUpError("tridiagonal solve: zero pivot");
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

double brent(const std::function<double(double)>& f, double a, double b, double xtol,
             int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw ConvergenceError("brent: root not bracketed");
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2e-16 * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2 * m * s;
                q = 1 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2 * m * q * (q - r) - (b - a) * (r - 1));
                q = (q - 1) * (r - 1) * (s - 1);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2 * p < std::min(3 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
        fb = f(b);
    }
    throw ConvergenceError("brent: iteration limit");
}

void cubic_lagrange_weights(double t, double w[4]) {
    // nodes at -1, 0, 1, 2; evaluation at t in [0, 1]
    w[0] = -t * (t - 1) * (t - 2) / 6.0;
    w[1] = (t + 1) * (t - 1) * (t - 2) / 2.0;
    w[2] = -(t + 1) * t * (t - 2) / 2.0;
    w[3] = (t + 1) * t * (t - 1) / 6.0;
}

}  // namespace wedge::num
