#include "doctest.h"
#include "freebound/quadrature.hpp"
#include "freebound/resolvent.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace freebound;
using Kind = Constraint::Kind;

namespace {

constexpr double pi = std::numbers::pi;

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

ResolventProblem two_corner(double lambda, double nu, double theta)
{
    ResolventProblem p;
    p.lambda = lambda;
    if (nu > 0) p.intervals.push_back({Kind::Forbidden, 0.0, nu});
    if (theta < lambda + 1) p.intervals.push_back({Kind::Forbidden, theta, lambda + 1});
    return p;
}

// limit at a band edge, assuming rho = rho0 + c sqrt(d) near it
double edge_limit(const DensityProfile& p, double edge, double inward)
{
    const double d1 = 1e-10, d2 = 4e-10;
    const double r1 = p(edge + inward * d1), r2 = p(edge + inward * d2);
    return r1 - (r2 - r1);
}

double entropy(double x) { return x <= 0 ? 0.0 : x * std::log(x) - x; }

// L0(mu) + L0(top - mu) - int log|mu - w| rho(w) dw
double effective_potential(const DensityProfile& p, double top, double mu)
{
    QuadOptions opt;
    opt.abs_tol = 1e-11;
    double s = 0.0;
    for (const auto& f : p.frozen)
        if (f.value != 0.0)
            s += f.value * integrate([&](double w) { return w == mu ? 0.0 : std::log(std::abs(mu - w)); }, f.lo, f.hi, opt, {mu});
    for (const auto& b : p.bands)
        s += integrate_edges([&](double w) { return w == mu ? 0.0 : std::log(std::abs(mu - w)) * b.rho(w); }, b.band.lo,
                             b.band.hi, opt, {mu});
    return entropy(mu) + entropy(top - mu) - s;
}

}  // namespace

TEST_CASE("principal values")
{
    CHECK(near(pv_integral([](double) { return 1.0; }, {-1.0, 1.0}, 0.0), 0.0, 1e-14));
    for (double beta : {0.5, 1.0, 3.0})
        for (double w : {0.1, 0.3, 0.77}) {
            double v = pv_integral([&](double u) { return 1.0 / (beta + u); }, {0.0, 1.0}, w);
            double exact = pi / ((beta + w) * std::sqrt(beta * (beta + 1)));
            CHECK(std::abs(v - exact) < 1e-10 * std::abs(exact));
        }
    // pole outside the band
    for (double w : {1.5, 4.0}) {
        const double beta = 1.0;
        double v = pv_integral([&](double u) { return 1.0 / (beta + u); }, {0.0, 1.0}, w);
        double exact = pi / (beta + w) * (1 / std::sqrt(beta * (beta + 1)) + 1 / std::sqrt(w * (w - 1)));
        CHECK(std::abs(v - exact) < 1e-10 * std::abs(exact));
    }
    CHECK_THROWS_AS(pv_integral([](double) { return 1.0; }, {0.0, 1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("kernel identities")
{
    CHECK(near(first_kernel(0.0), -2 * pi * std::log(2.0), 1e-14));
    CHECK(near(integrate_arcsine([](double u) { return std::log(u); }, 0.0, 1.0), -2 * pi * std::log(2.0), 1e-11));
    CHECK(near(integrate_arcsine([](double u) { return std::log(1 + u); }, 0.0, 1.0), first_kernel(1.0), 1e-12));
    CHECK(near(first_kernel(1.0), 2 * pi * std::log((1 + std::sqrt(2.0)) / 2), 1e-14));
    CHECK(near(integrate_arcsine([](double u) { return u * std::log(1 + u); }, 0.0, 1.0), second_kernel(1.0), 1e-12));
    const double A = 1, B = 2, w = 0.3;
    double lower = -std::sqrt(w * (1 - w)) / pi *
                   pv_integral([&](double v) { return std::log((A + v) / (B + v)); }, {0.0, 1.0}, w);
    CHECK(near(lower, ab_kernel(A, B, w), 1e-9));
    auto rep = kernel_identities_check();
    CHECK(rep.first < 1e-9);
    CHECK(rep.second < 1e-9);
    CHECK(rep.ab < 1e-9);
}

TEST_CASE("problem validation and layout")
{
    ResolventProblem p;
    p.lambda = 1.0;
    p.intervals = {{Kind::Packed, 0.2, 0.4}, {Kind::Forbidden, 1.5, 2.0}};
    auto segs = p.free_segments();
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].hi == 0.2);
    CHECK(segs[1].lo == 0.4);
    CHECK(p.packed_length() == doctest::Approx(0.2));
    auto roots = p.kernel_roots();
    CHECK(roots.numerator == std::vector<double>{0.0, 0.4});
    CHECK(roots.denominator == std::vector<double>{2.0, 0.2});

    ResolventProblem bad = p;
    bad.intervals = {{Kind::Forbidden, 0.5, 0.4}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.intervals = {{Kind::Forbidden, 0.5, 1.0}, {Kind::Forbidden, 0.7, 1.2}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.intervals = {{Kind::Forbidden, 0.1, 1.5}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.lambda = -1;
    CHECK_THROWS_AS(solve(bad), std::invalid_argument);
}

TEST_CASE("no constraints reproduces the uniform band")
{
    for (double lambda : {0.5, 1.0, 2.5}) {
        ResolventProblem p;
        p.lambda = lambda;
        auto s = solve(p);
        REQUIRE(s.converged);
        REQUIRE(s.bands.size() == 1);
        auto u = uniform_band(lambda);
        CHECK(near(s.bands[0].lo, u.lo, 1e-6));
        CHECK(near(s.bands[0].hi, u.hi, 1e-6));
        for (int i = 1; i < 20; ++i) {
            double z = u.lo + u.width() * i / 20.0;
            CHECK(near(s.profile(z), uniform_rho(z, lambda), 1e-4));
        }
    }
}

TEST_CASE("two forbidden corners match the closed form")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto check = [](double lambda, double nu, double theta) {
        CAPTURE(lambda);
        CAPTURE(nu);
        CAPTURE(theta);
        auto s = solve(two_corner(lambda, nu, theta));
        auto c = two_corner_solution(lambda, nu, theta);
        CAPTURE(to_string(c.regime));
        REQUIRE(s.converged);
        CHECK(s.max_residual() < 1e-8);
        REQUIRE(s.bands.size() == 1);
        CHECK(near(s.bands[0].lo, c.band.lo, 1e-6));
        CHECK(near(s.bands[0].hi, c.band.hi, 1e-6));
        for (std::size_t i = 0; i < s.density_nodes[0].size(); ++i)
            CHECK(near(s.density_grid[0][i], c.profile(s.density_nodes[0][i]), 1e-4));
        for (int i = 1; i < 40; ++i) {
            double z = nu + (theta - nu) * i / 40.0;
            CHECK(near(s.profile(z), c.profile(z), 1e-4));
        }
    };
    check(1.0, 0.3, 1.7);
    for (int i = 0; i < 6; ++i) {
        double lambda = 0.5 + 2 * unit(rng), nu = lambda * unit(rng);
        double theta = nu + 1.05 + (lambda - nu - 0.05) * unit(rng);
        if (theta > lambda + 1) theta = lambda + 1;
        check(lambda, nu, theta);
    }
    // one of each merged regime
    check(1.0, 0.05, 1.5);
    check(1.0, 0.5, 1.95);
    check(2.0, 0.1, 2.9);
}

TEST_CASE("boundary values follow the edge types")
{
    auto s = solve(two_corner(1.0, 0.3, 1.7));
    REQUIRE(s.bands.size() == 1);
    const auto b = s.bands[0];
    CHECK(s.edges[0][0] == EdgeKind::Saturated);
    CHECK(s.edges[0][1] == EdgeKind::Saturated);
    CHECK(near(edge_limit(s.profile, b.lo, 1), 1.0, 1e-6));
    CHECK(near(edge_limit(s.profile, b.hi, -1), 1.0, 1e-6));

    auto m = solve(two_corner(1.0, 0.05, 1.5));
    REQUIRE(m.bands.size() == 1);
    CHECK(m.edges[0][0] == EdgeKind::Void);
    CHECK(near(edge_limit(m.profile, m.bands[0].lo, 1), 0.0, 1e-6));
    CHECK(near(edge_limit(m.profile, m.bands[0].hi, -1), 1.0, 1e-6));
}

TEST_CASE("collapsed window is frozen")
{
    auto s = solve(two_corner(1.0, 0.4, 1.4));
    CHECK(s.converged);
    CHECK(s.bands.empty());
    CHECK(s.profile(0.9) == 1.0);
    CHECK(s.profile(0.2) == 0.0);
    CHECK(near(s.profile.integrate(), 1.0, 1e-12));
}

TEST_CASE("packed interval at the lower end")
{
    ResolventProblem p;
    p.lambda = 1.0;
    p.intervals = {{Kind::Packed, 0.0, 0.3}};
    auto s = solve(p);
    REQUIRE(s.converged);
    REQUIRE(s.bands.size() == 1);
    CHECK(s.edges[0][0] == EdgeKind::Void);
    double band = integrate_edges(s.profile.bands[0].rho, s.bands[0].lo, s.bands[0].hi);
    CHECK(near(band + 0.3, 1.0, 1e-8));
    CHECK(near(s.profile.integrate(), 1.0, 1e-8));
    for (double f : {0.2, 0.5, 0.8}) {
        double z = s.bands[0].lo + f * s.bands[0].width();
        double v = s.profile(z);
        CHECK(v > 0);
        CHECK(v < 1);
    }
}

TEST_CASE("packed interval in the middle splits the liquid region")
{
    ResolventProblem p;
    p.lambda = 1.0;
    p.intervals = {{Kind::Packed, 0.8, 1.0}};
    auto s = solve(p);
    REQUIRE(s.converged);
    REQUIRE(s.bands.size() == 2);
    CHECK(s.max_residual() < 1e-8);
    CHECK(near(s.profile.integrate(), 1.0, 1e-8));
    CHECK(!s.notes.empty());

    // equal chemical potential in both bands, higher in the empty stretches
    const double top = p.top();
    double v1 = effective_potential(s.profile, top, s.bands[0].lo + 0.4 * s.bands[0].width());
    double v1b = effective_potential(s.profile, top, s.bands[0].lo + 0.7 * s.bands[0].width());
    double v2 = effective_potential(s.profile, top, s.bands[1].lo + 0.5 * s.bands[1].width());
    CHECK(near(v1, v1b, 1e-7));
    CHECK(near(v1, v2, 1e-7));
    CHECK(effective_potential(s.profile, top, 0.5 * (s.bands[0].hi + 0.8)) > v1);
    CHECK(effective_potential(s.profile, top, 0.5 * s.bands[0].lo) > v1);

    for (const auto& b : s.bands)
        for (int i = 1; i < 10; ++i) {
            double v = s.profile(b.lo + b.width() * i / 10.0);
            CHECK(v >= 0);
            CHECK(v <= 1);
        }
}
