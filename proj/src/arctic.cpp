#include "freebound/arctic.hpp"
#include "freebound/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freebound {

namespace {

using std::numbers::pi;

struct Restricted {
    Eigen::Vector2d origin, dir;
    double a2, a1, a0;  // q(s) = a2 s^2 + a1 s + a0 along origin + s dir
};

Restricted restrict_to(const ConicCurve& q, const Line& l) {
    double n2 = l.a * l.a + l.b * l.b;
    if (n2 == 0) throw std::invalid_argument("degenerate line");
    Eigen::Vector2d origin(-l.a * l.c / n2, -l.b * l.c / n2);
    Eigen::Vector2d dir(-l.b, l.a);
    dir /= std::sqrt(n2);
    double x = origin.x(), y = origin.y(), u = dir.x(), v = dir.y();
    Restricted r{origin, dir, 0, 0, 0};
    r.a2 = q.A * u * u + q.B * u * v + q.C * v * v;
    r.a1 = 2 * q.A * x * u + q.B * (x * v + y * u) + 2 * q.C * y * v + q.D * u + q.E * v;
    r.a0 = q(x, y);
    return r;
}

ConicCurve expand(const std::array<double, 3>& l1, double w1, const std::array<double, 3>& l2, double w2,
                  double f) {
    // w1 (a1 x + b1 y + c1)^2 + w2 (a2 x + b2 y + c2)^2 + f
    ConicCurve q;
    for (auto [l, w] : {std::pair{l1, w1}, std::pair{l2, w2}}) {
        auto [a, b, c] = l;
        q.A += w * a * a;
        q.B += w * 2 * a * b;
        q.C += w * b * b;
        q.D += w * 2 * a * c;
        q.E += w * 2 * b * c;
        q.F += w * c * c;
    }
    q.F += f;
    return q;
}

double arg_unit(std::complex<double> v) {
    // Arg in [0, pi] over pi
    double a = std::abs(std::arg(v));
    return a / pi;
}

}  // namespace

Eigen::Matrix3d ConicCurve::matrix() const {
    Eigen::Matrix3d m;
    m << A, B / 2, D / 2, B / 2, C, E / 2, D / 2, E / 2, F;
    return m;
}

bool ConicCurve::is_ellipse() const {
    double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
    if (4 * A * C - B * B <= 1e-14 * scale * scale) return false;
    // real and non-degenerate: value at the center has the opposite sign of A
    Eigen::Vector2d c = center();
    return (*this)(c.x(), c.y()) * A < 0;
}

Eigen::Vector2d ConicCurve::center() const {
    Eigen::Matrix2d m;
    m << 2 * A, B, B, 2 * C;
    return m.fullPivLu().solve(Eigen::Vector2d(-D, -E));
}

double ConicCurve::tangency_residual(const Line& l) const {
    Restricted r = restrict_to(*this, l);
    double disc = r.a1 * r.a1 - 4 * r.a2 * r.a0;
    double scale = r.a1 * r.a1 + 4 * std::abs(r.a2 * r.a0);
    return scale == 0 ? 0.0 : std::abs(disc) / scale;
}

Eigen::Vector2d ConicCurve::touch_point(const Line& l) const {
    Restricted r = restrict_to(*this, l);
    if (r.a2 == 0) throw std::domain_error("line is asymptotic to the conic");
    return r.origin - r.a1 / (2 * r.a2) * r.dir;
}

std::vector<Eigen::Vector2d> ConicCurve::intersect(const Line& l) const {
    Restricted r = restrict_to(*this, l);
    std::vector<Eigen::Vector2d> out;
    if (r.a2 == 0) {
        if (r.a1 != 0) out.push_back(r.origin - r.a0 / r.a1 * r.dir);
        return out;
    }
    double disc = r.a1 * r.a1 - 4 * r.a2 * r.a0;
    if (disc < 0) return out;
    double sq = std::sqrt(disc);
    // stable roots
    double qv = -0.5 * (r.a1 + std::copysign(sq, r.a1));
    std::vector<double> s;
    if (qv == 0) {
        s = {0.0};
    } else {
        s = {qv / r.a2, r.a0 / qv};
    }
    std::sort(s.begin(), s.end());
    for (double si : s) out.push_back(r.origin + si * r.dir);
    std::sort(out.begin(), out.end(), [](const auto& p, const auto& q) {
        return p.x() != q.x() ? p.x() < q.x() : p.y() < q.y();
    });
    return out;
}

std::vector<Eigen::Vector2d> ConicCurve::sample(int n) const {
    if (n <= 0) throw std::invalid_argument("sample count must be positive");
    if (!is_ellipse()) throw std::domain_error("conic is not a real ellipse");
    Eigen::Vector2d c = center();
    double fc = (*this)(c.x(), c.y());
    Eigen::Matrix2d quad;
    quad << A, B / 2, B / 2, C;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(quad);
    Eigen::Vector2d axes = (-fc / es.eigenvalues().array()).sqrt();
    std::vector<Eigen::Vector2d> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        double phi = 2 * pi * i / n;
        Eigen::Vector2d local(axes(0) * std::cos(phi), axes(1) * std::sin(phi));
        out.push_back(c + es.eigenvectors() * local);
    }
    return out;
}

bool ConicCurve::proportional_to(const ConicCurve& o, double tol) const {
    Eigen::Matrix<double, 6, 1> u, v;
    u << A, B, C, D, E, F;
    v << o.A, o.B, o.C, o.D, o.E, o.F;
    if (u.norm() == 0 || v.norm() == 0) return false;
    u.normalize();
    v.normalize();
    if (u.dot(v) < 0) v = -v;
    return (u - v).norm() <= tol;
}

std::array<Line, 6> hexagon_sides(double lambda, double theta) {
    return {Line{1, 0, 0},
            Line{1, 0, -(1 + theta)},
            Line{0, 1, 0},
            Line{0, 1, -(1 + lambda)},
            Line{-1, 1, -lambda},
            Line{-1, 1, theta}};
}

ConicCurve hexagon_arctic(double lambda, double theta) {
    if (!(lambda > 0) || !(theta > 0)) throw std::invalid_argument("hexagon sides must be positive");
    double l1 = 1 + lambda, t1 = 1 + theta;
    return expand({l1, t1, -l1 * t1}, 1 / (1 + lambda + theta), {l1, -t1, 0}, 1 / (lambda * theta), -l1 * t1);
}

ConicCurve cuthex_arctic(double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    return expand({1, -1, 0}, 1 + 2 * lambda, {1, 1, -(lambda + 1)}, lambda * lambda,
                  -lambda * lambda * (1 + 2 * lambda));
}

double slice_of(double x, double y, double lambda) { return lambda - (y - x); }

namespace {

std::array<double, 3> slope_quadratic(double x, double y, double lambda, double theta) {
    double d = x - y;
    double a = lambda * theta - d * d - (lambda - theta) * d;
    double b = lambda * theta + 2 * y * d + (lambda - theta) * y - (1 + lambda) * d;
    double c = (1 + lambda) * y - y * y;
    return {a, b, c};
}

}  // namespace

double slope_discriminant(double x, double y, double lambda, double theta) {
    auto [a, b, c] = slope_quadratic(x, y, lambda, theta);
    return b * b - 4 * a * c;
}

bool in_liquid_region(double x, double y, double lambda, double theta) {
    return slope_discriminant(x, y, lambda, theta) < 0;
}

SlopePoint slope_field(double x, double y, double lambda, double theta) {
    auto [a, b, c] = slope_quadratic(x, y, lambda, theta);
    double disc = b * b - 4 * a * c;
    if (!(disc < 0)) throw std::domain_error("point outside the liquid region");
    std::complex<double> z(-b / (2 * a), std::sqrt(-disc) / (2 * std::abs(a)));
    std::complex<double> w = -1.0 - z;
    return SlopePoint{x, y, z, w, arg_unit(-w), arg_unit(-1.0 / z)};
}

double slope_sum(double x, double t, double lambda, double theta) {
    Band band = hexagon_band(lambda, theta, lambda - t);
    double num = (lambda + theta) * std::sqrt(std::max(0.0, (band.hi - x) * (x - band.lo)));
    double den = lambda * theta - t * (1 + theta) + 2 * x * (x + t - 1 - (lambda + theta) / 2);
    return std::atan2(num, den) / pi;
}

double slope_density_consistency(double lambda, double theta, double t, int grid) {
    if (grid <= 0) throw std::invalid_argument("grid must be positive");
    double slice = lambda - t;
    Band band = hexagon_band(lambda, theta, slice);
    if (!(band.width() > 0)) throw std::domain_error("line misses the liquid region");
    double worst = 0;
    for (int i = 0; i < grid; ++i) {
        double x = band.lo + band.width() * (i + 0.5) / grid;
        SlopePoint p = slope_field(x, x + t, lambda, theta);
        worst = std::max(worst, std::abs(hexagon_rho(x, lambda, theta, slice) - (p.hx + p.hy)));
    }
    return worst;
}

}  // namespace freebound
