#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace freebound {

// a x + b y + c = 0
struct Line {
    double a, b, c;
};

// A x^2 + B xy + C y^2 + D x + E y + F
struct ConicCurve {
    double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;

    double operator()(double x, double y) const { return A * x * x + B * x * y + C * y * y + D * x + E * y + F; }
    Eigen::Matrix3d matrix() const;
    bool is_ellipse() const;
    Eigen::Vector2d center() const;
    // Relative discriminant of the conic restricted to the line; zero for a tangent.
    double tangency_residual(const Line& l) const;
    // Point where a tangent line touches.
    Eigen::Vector2d touch_point(const Line& l) const;
    // Intersections with a line, empty when it misses.
    std::vector<Eigen::Vector2d> intersect(const Line& l) const;
    // n points at uniformly spaced angles of the principal-axis parameterization.
    std::vector<Eigen::Vector2d> sample(int n) const;
    // Same curve up to a nonzero factor.
    bool proportional_to(const ConicCurve& o, double tol) const;
};

// Sides of the hexagon with sides lambda, theta: x=0, x=1+theta, y=0, y=1+lambda, y=x+lambda, y=x-theta.
std::array<Line, 6> hexagon_sides(double lambda, double theta);
ConicCurve hexagon_arctic(double lambda, double theta);
ConicCurve cuthex_arctic(double lambda);

// Hexagon point (x, y) seen as a slice parameter and a position along the slice.
double slice_of(double x, double y, double lambda);

struct SlopePoint {
    double x, y;
    std::complex<double> z, w;  // 1 + z + w = 0
    double hx, hy;
};

// Discriminant of the quadratic for z; negative in the liquid region.
double slope_discriminant(double x, double y, double lambda, double theta);
bool in_liquid_region(double x, double y, double lambda, double theta);
// Throws std::domain_error outside the liquid region.
SlopePoint slope_field(double x, double y, double lambda, double theta);

// hx + hy on the line y = x + t from the explicit arctangent form, with the branch in [0, 1].
double slope_sum(double x, double t, double lambda, double theta);

// Max |hexagon density - (hx + hy)| over grid interior points of the line y = x + t.
double slope_density_consistency(double lambda, double theta, double t, int grid);

}  // namespace freebound
