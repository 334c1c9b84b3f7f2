#include "doctest.h"
#include "freebound/arctic.hpp"
#include "freebound/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace freebound;

namespace {

constexpr double pi = std::numbers::pi;

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool inside_hexagon(double x, double y, double lambda, double theta)
{
    return x > 0 && x < 1 + theta && y > 0 && y < 1 + lambda && y < x + lambda && y > x - theta;
}

}  // namespace

TEST_CASE("hexagon ellipse is tangent to the six sides")
{
    for (auto [l, t] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {3.0, 0.5}, {0.2, 0.7}, {5.0, 5.0}}) {
        auto q = hexagon_arctic(l, t);
        CHECK(q.is_ellipse());
        for (const auto& side : hexagon_sides(l, t)) {
            CHECK(q.tangency_residual(side) < 1e-10);
            auto p = q.touch_point(side);
            CHECK(std::abs(side.a * p.x() + side.b * p.y() + side.c) < 1e-12);
            CHECK(std::abs(q(p.x(), p.y())) < 1e-12);
        }
    }
    // a secant is not tangent
    CHECK(hexagon_arctic(1, 1).tangency_residual(Line{1, 0, -1}) > 0.1);
}

TEST_CASE("touch points sit on the slices where the band meets a side")
{
    const double l = 2, t = 1;
    auto q = hexagon_arctic(l, t);
    std::vector<double> slices;
    for (const auto& side : hexagon_sides(l, t)) {
        auto p = q.touch_point(side);
        slices.push_back(slice_of(p.x(), p.y(), l));
    }
    std::sort(slices.begin(), slices.end());
    auto expected = hexagon_touch_points(l, t);
    for (int i = 0; i < 6; ++i) CHECK(near(slices[i], expected[i], 1e-12));
    CHECK(near(expected[1], 1.0 / 3, 1e-15));
    CHECK(near(expected[2], 1.0, 1e-15));
    CHECK(near(expected[3], 2.0, 1e-15));
    CHECK(near(expected[4], 8.0 / 3, 1e-15));
}

TEST_CASE("symmetric hexagon gives a symmetric ellipse")
{
    for (double l : {0.5, 1.0, 3.0}) {
        auto q = hexagon_arctic(l, l);
        CHECK(near(q.A, q.C, 1e-12 * std::abs(q.A)));
        CHECK(near(q.D, q.E, 1e-12 * std::abs(q.D)));
    }
}

TEST_CASE("cut hexagon conic")
{
    auto q = cuthex_arctic(1);
    auto pts = q.intersect(Line{1, -1, 0});
    REQUIRE(pts.size() == 2);
    CHECK(near(pts[0].x(), 1 - std::sqrt(3.0) / 2, 1e-14));
    CHECK(near(pts[1].x(), 1 + std::sqrt(3.0) / 2, 1e-14));
    for (double l : {0.3, 1.0, 3.0, 7.0}) {
        auto c = cuthex_arctic(l);
        CHECK(c.tangency_residual(Line{0, 1, 0}) < 1e-10);
        CHECK(c.tangency_residual(Line{0, 1, -(l + 1)}) < 1e-10);
        for (const auto& side : hexagon_sides(l, l)) CHECK(c.tangency_residual(side) < 1e-10);
        CHECK(c.proportional_to(hexagon_arctic(l, l), 1e-12));
        auto d = c.intersect(Line{1, -1, 0});
        REQUIRE(d.size() == 2);
        auto band = uniform_band(l);
        if (l == 3.0) {
            CHECK(near(d[0].x(), band.lo, 1e-12));
            CHECK(near(d[1].x(), band.hi, 1e-12));
        }
        CHECK(near(d[0].x(), (l + 1) / 2 - std::sqrt(1 + 2 * l) / 2, 1e-12));
        CHECK(near(d[1].x(), (l + 1) / 2 + std::sqrt(1 + 2 * l) / 2, 1e-12));
    }
}

TEST_CASE("boundary samples lie on the curve")
{
    auto q = hexagon_arctic(2, 1);
    auto pts = q.sample(64);
    CHECK(pts.size() == 64);
    for (const auto& p : pts) CHECK(std::abs(q(p.x(), p.y())) < 1e-12);
    CHECK_THROWS_AS(q.sample(0), std::invalid_argument);
    CHECK_THROWS(hexagon_arctic(0, 1));
}

TEST_CASE("slopes at the center of the regular hexagon")
{
    auto p = slope_field(1, 1, 1, 1);
    CHECK(near(p.hx, 1.0 / 3, 1e-14));
    CHECK(near(p.hy, 1.0 / 3, 1e-14));
    CHECK(near(std::atan(std::sqrt(3.0)) / pi, 1.0 / 3, 1e-15));
    CHECK(p.z.imag() > 0);
    CHECK(std::abs(1.0 + p.z + p.w) == 0.0);
    CHECK_THROWS_AS(slope_field(0.01, 0.01, 1, 1), std::domain_error);
}

TEST_CASE("discriminant sign matches the ellipse")
{
    for (auto [l, t] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {3.0, 0.5}}) {
        auto q = hexagon_arctic(l, t);
        int mismatches = 0, inside = 0;
        for (int i = 0; i < 200; ++i) {
            for (int j = 0; j < 200; ++j) {
                double x = -0.5 + (t + 2) * (i + 0.5) / 200, y = -0.5 + (l + 2) * (j + 0.5) / 200;
                double e = q(x, y), d = slope_discriminant(x, y, l, t);
                if (std::abs(e) < 1e-9) continue;
                if ((e < 0) != (d < 0)) ++mismatches;
                inside += e < 0;
            }
        }
        CHECK(mismatches == 0);
        CHECK(inside > 1000);
        // zero on the curve
        for (const auto& p : q.sample(50)) CHECK(std::abs(slope_discriminant(p.x(), p.y(), l, t)) < 1e-10);
    }
}

TEST_CASE("slopes are tile fractions inside the liquid region")
{
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> side(0.2, 3.0), unit(0, 1);
    int evaluated = 0;
    for (int k = 0; k < 20; ++k) {
        double l = side(rng), t = side(rng);
        for (int i = 0; i < 200; ++i) {
            double x = unit(rng) * (1 + t), y = unit(rng) * (1 + l);
            if (!in_liquid_region(x, y, l, t)) continue;
            auto p = slope_field(x, y, l, t);
            CHECK(p.hx >= 0);
            CHECK(p.hy >= 0);
            CHECK(p.hx + p.hy <= 1 + 1e-14);
            CHECK(inside_hexagon(x, y, l, t));
            ++evaluated;
        }
    }
    CHECK(evaluated > 500);
}

TEST_CASE("root branch is continuous along walks")
{
    for (auto [l, t] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {3.0, 0.5}}) {
        auto q = hexagon_arctic(l, t);
        auto c = q.center();
        auto boundary = q.sample(1000);
        // closed loop at 90% of the way to the curve, then a ray from the center outwards
        std::vector<Eigen::Vector2d> path;
        for (const auto& b : boundary) path.push_back(c + 0.9 * (b - c));
        for (int i = 0; i <= 1000; ++i) path.push_back(c + (0.999 * i / 1000) * (boundary[137] - c));
        double worst = 0, worst_step = 0;
        auto prev = slope_field(path[0].x(), path[0].y(), l, t).z;
        for (std::size_t i = 1; i < path.size(); ++i) {
            auto z = slope_field(path[i].x(), path[i].y(), l, t).z;
            worst = std::max(worst, std::abs(z - prev));
            worst_step = std::max(worst_step, (path[i] - path[i - 1]).norm());
            CHECK(z.imag() > 0);
            prev = z;
        }
        CHECK(worst < 100 * worst_step);
    }
}

TEST_CASE("sum of slopes matches the arctangent form")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int k = 0; k < 10; ++k) {
        double t = 0.2 + 2.8 * unit(rng), l = t + 3 * unit(rng);
        double cut = -t + (l + t) * (0.05 + 0.9 * unit(rng));  // y = x + cut
        Band band = hexagon_band(l, t, l - cut);
        for (int i = 0; i < 50; ++i) {
            double x = band.lo + band.width() * (i + 0.5) / 50;
            auto p = slope_field(x, x + cut, l, t);
            CHECK(near(p.hx + p.hy, slope_sum(x, cut, l, t), 1e-10));
        }
    }
}

TEST_CASE("slopes agree with the hexagon density")
{
    CHECK(slope_density_consistency(1, 1, 0, 50) < 1e-8);
    // case (iii) window at (2, 1)
    const double l = 2, t = 1;
    const double from = l / (1 + t) - t, to = l * t / (1 + t);
    for (int i = 1; i < 10; ++i) {
        double c = from + (to - from) * i / 10;
        CHECK(hexagon_case(l, t, l - c) == HexagonCase::III);
        CHECK(slope_density_consistency(l, t, c, 50) < 1e-8);
    }
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int k = 0; k < 5; ++k) {
        double th = 0.2 + 2.8 * unit(rng), la = th + 3 * unit(rng);
        double c = -th + (la + th) * (0.02 + 0.96 * unit(rng));
        CHECK(slope_density_consistency(la, th, c, 50) < 1e-8);
    }
    CHECK_THROWS(slope_density_consistency(1, 1, 1, 50));
}

TEST_CASE("diagonal of the cut hexagon")
{
    for (double l : {1.0, 2.5}) {
        Band band = uniform_band(l);
        double worst = 0;
        for (int i = 0; i < 50; ++i) {
            double x = band.lo + band.width() * (i + 0.5) / 50;
            auto p = slope_field(x, x, l, l);
            worst = std::max(worst, std::abs(p.hx + p.hy - uniform_rho(x, l)));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("slopes near the curve approach the frozen phases")
{
    const double l = 2, t = 1;
    auto touch = hexagon_touch_points(l, t);
    // one slice per region plus one more in the middle
    std::vector<double> slices = {touch[1] / 2, (touch[1] + touch[2]) / 2, (touch[2] + touch[3]) / 2,
                                  (touch[3] + touch[4]) / 2, (touch[4] + touch[5]) / 2, touch[2] + 0.1};
    std::vector<HexagonCase> seen;
    for (double s : slices) {
        auto sol = hexagon_solution(l, t, s);
        seen.push_back(sol.which);
        const double below = sol.profile.frozen.front().value, above = sol.profile.frozen.back().value;
        CHECK(below == ((sol.which == HexagonCase::III || sol.which == HexagonCase::IV) ? 0.0 : 1.0));
        CHECK(above == ((sol.which == HexagonCase::III || sol.which == HexagonCase::II) ? 0.0 : 1.0));
        const double cut = l - s, d = 1e-9 * sol.band.width();
        auto lo = slope_field(sol.band.lo + d, sol.band.lo + d + cut, l, t);
        auto hi = slope_field(sol.band.hi - d, sol.band.hi - d + cut, l, t);
        CHECK(near(lo.hx + lo.hy, below, 1e-3));
        CHECK(near(hi.hx + hi.hy, above, 1e-3));
    }
    for (auto c : {HexagonCase::I, HexagonCase::II, HexagonCase::III, HexagonCase::IV, HexagonCase::V})
        CHECK(std::find(seen.begin(), seen.end(), c) != seen.end());
}
