#include "doctest.h"
#include "freebound/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace freebound;

TEST_CASE("Kronrod rule is exact on polynomials")
{
    auto r = integrate_gk([](double x) { return std::pow(x, 18); }, -1.0, 1.0);
    CHECK(r.value == doctest::Approx(2.0 / 19.0).epsilon(1e-14));
    CHECK(r.evaluations == 21);
    CHECK(integrate([](double x) { return std::pow(x, 30); }, -1.0, 1.0) == doctest::Approx(2.0 / 31.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration of edge singularities")
{
    CHECK(integrate([](double x) { return std::log(x); }, 0.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(integrate_edges([](double x) { return std::sqrt(x * (1 - x)); }, 0.0, 1.0) ==
          doctest::Approx(std::numbers::pi / 8).epsilon(1e-13));
    CHECK(integrate_arcsine([](double) { return 1.0; }, 2.0, 5.0) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
    CHECK(integrate_arcsine([](double u) { return u; }, 0.0, 1.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-13));
    // kink at a breakpoint
    CHECK(integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, {}, {0.3}) ==
          doctest::Approx(0.045 + 0.245).epsilon(1e-14));
}

TEST_CASE("Chebyshev nodes integrate polynomials against the arcsine weight")
{
    auto nd = chebyshev_nodes(-1.0, 1.0, 8);
    double s0 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < nd.x.size(); ++i) {
        s0 += nd.w[i];
        s2 += nd.w[i] * nd.x[i] * nd.x[i];
    }
    CHECK(s0 == doctest::Approx(std::numbers::pi));
    CHECK(s2 == doctest::Approx(std::numbers::pi / 2));
}
