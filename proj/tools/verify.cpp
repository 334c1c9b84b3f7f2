#include "verify.hpp"

#include "freebound/arctic.hpp"
#include "freebound/density.hpp"
#include "freebound/enumeration.hpp"
#include "freebound/resolvent.hpp"
#include "freebound/sampler.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

namespace freebound::cli {

namespace {

// measured <= tolerance passes
Check bounded(std::string name, double measured, double tolerance)
{
    return {std::move(name), measured <= tolerance, measured, tolerance};
}

double count_mismatches()
{
    long bad = 0;
    for (const Rational& q : {Rational(1), Rational(2), Rational(1, 2), Rational(5, 3)})
        for (int k = 1; k <= 3; ++k)
            for (int n = 0; n <= 3; ++n) {
                Region r = Region::cut_hexagon(k, n, q);
                for (const auto& m : all_configs(r)) {
                    Rational d = z_det(r, m);
                    bad += d != z_product(r, m) || d != brute_force_z(r, m);
                }
            }
    return double(bad);
}

double symmetry_failures()
{
    long bad = 0;
    for (const Rational& q : {Rational(2), Rational(5, 3)})
        for (int k = 1; k <= 4; ++k)
            for (int n = 0; n <= 4; ++n) {
                Region r = Region::cut_hexagon(k, n, q);
                for (const auto& m : all_configs(r)) bad += q_symmetry_residual(r, m) != 0;
            }
    return double(bad);
}

double chain_tv(std::uint64_t seed)
{
    Region r = Region::cut_hexagon(2, 3, 2);
    std::map<Config, long> counts;
    long samples = 0;
    mcmc_run(r, 400000, 40000, seed, [&](const Config& m) {
        ++counts[m];
        ++samples;
    });
    ExactDistribution d = exact_distribution(r);
    double tv = 0;
    for (std::size_t i = 0; i < d.configs.size(); ++i) {
        auto it = counts.find(d.configs[i]);
        double emp = it == counts.end() ? 0.0 : double(it->second) / samples;
        tv += std::abs(emp - d.probability(i).get_d());
    }
    return tv / 2;
}

double limit_shape_l1(std::uint64_t seed)
{
    Region r = Region::cut_hexagon(30, 30, 1);
    Histogram h = make_histogram(r, 20, 1.0 / 30);
    mcmc_run(r, 3000000, 300000, seed, [&](const Config& m) { h.add(m, r.lowest()); }, 100);
    return l1_distance(h, [](double t) { return uniform_rho(t, 1.0); });
}

double mass_error(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
        double lambda = 0.2 + 3 * u(rng), nu = lambda * u(rng), theta = nu + 1 + (lambda - nu) * u(rng);
        worst = std::max(worst, std::abs(uniform_profile(lambda).integrate() - 1));
        worst = std::max(worst, std::abs(two_corner_solution(lambda, nu, theta).profile.integrate() - 1));
        double beta = 0.05 + 3 * u(rng), alpha = 4 * u(rng);
        worst = std::max(worst, std::abs(qcut_profile(alpha, beta).integrate() - beta));
        double th = 0.1 + 2 * u(rng), la = th + 3 * u(rng);
        worst = std::max(worst, std::abs(hexagon_solution(la, th, (la + th) * u(rng)).profile.integrate() - 1));
        worst = std::max(worst, std::abs(halfcut_profile(4 * u(rng)).integrate() - 1));
    }
    return worst;
}

double degeneration_error()
{
    double worst = 0;
    for (double lambda : {0.5, 1.0, 3.0}) {
        Band u = uniform_band(lambda);
        double top = std::min(u.hi + 0.05, lambda + 1);
        auto s = two_corner_solution(lambda, 0.0, top);
        for (int i = 0; i <= 100; ++i) {
            double z = top * i / 100.0;
            worst = std::max(worst, std::abs(s.profile(z) - uniform_rho(z, lambda)) / 1e-8);
        }
        Band h = hexagon_band(lambda, lambda, lambda);
        worst = std::max(worst, std::max(std::abs(h.lo - u.lo), std::abs(h.hi - u.hi)) / 1e-12);
        for (int i = 1; i < 20; ++i) {
            double t = (lambda + 1) * i / 20.0;
            worst = std::max(worst, std::abs(qcut_rho(t * 1e-4, lambda * 1e-4, 1e-4) - uniform_rho(t, lambda)) / 1e-3);
            double z = std::sqrt(2 * lambda + 1) * i / 20.0;
            worst = std::max(worst,
                             std::abs(halfcut_rho(z, lambda) - uniform_rho((lambda + 1) / 2 + z / 2, lambda)) / 1e-12);
        }
    }
    return worst;
}

double resolvent_error()
{
    double worst = kernel_identities_check().max() / 1e-9;
    for (auto [lambda, nu, theta] : {std::tuple{1.0, 0.3, 1.7}, {1.5, 0.6, 2.2}}) {
        ResolventProblem p{lambda,
                           {{Constraint::Kind::Forbidden, 0, nu}, {Constraint::Kind::Forbidden, theta, lambda + 1}}};
        auto sol = solve(p);
        auto exact = two_corner_solution(lambda, nu, theta);
        if (sol.bands.size() != 1) return 1e300;
        worst = std::max(worst, std::abs(sol.bands[0].lo - exact.band.lo) / 1e-6);
        worst = std::max(worst, std::abs(sol.bands[0].hi - exact.band.hi) / 1e-6);
        for (int i = 1; i < 20; ++i) {
            double z = exact.band.lo + exact.band.width() * i / 20;
            worst = std::max(worst, std::abs(sol.profile(z) - exact.profile(z)) / 1e-4);
        }
    }
    return worst;
}

double burgers_error(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int i = 0; i < 3; ++i) {
        double theta = 0.2 + 2 * u(rng), lambda = theta + 2 * u(rng);
        double t = -theta + (lambda + theta) * (0.05 + 0.9 * u(rng));
        worst = std::max(worst, slope_density_consistency(lambda, theta, t, 50) / 1e-8);
    }
    Band b = uniform_band(1);
    for (int i = 0; i < 50; ++i) {
        double x = b.lo + b.width() * (i + 0.5) / 50;
        auto p = slope_field(x, x, 1, 1);
        worst = std::max(worst, std::abs(p.hx + p.hy - uniform_rho(x, 1)) / 1e-8);
    }
    auto q = hexagon_arctic(2, 1);
    for (const auto& side : hexagon_sides(2, 1)) worst = std::max(worst, q.tangency_residual(side) / 1e-10);
    return worst;
}

double tsscpp_error()
{
    double worst = 0;
    for (int i = 0; i <= 100; ++i) {
        double z = i / 100.0;
        worst = std::max(worst, std::abs(exitile(z) - (1 - entertile(z))));
        worst = std::max(worst, std::abs(triangle_rho(z, 1.0) - exitile(z)));
        worst = std::max(worst, std::abs(tsscpp_rho(z, z) - entertile(z)));
    }
    return worst;
}

}  // namespace

int Report::exit_code() const
{
    for (const auto& c : checks)
        if (!c.passed) return 1;
    return 0;
}

Report run_verify(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Report r;
    r.checks.push_back(bounded("counts: determinant = product = enumeration", count_mismatches(), 0));
    r.checks.push_back(bounded("q-symmetry residuals", symmetry_failures(), 0));
    const auto& cal = symmetry_calibration();
    r.checks.push_back({"q-symmetry exponent fit", cal.fit_exact && cal.m_independent, cal.fit_exact ? 0.0 : 1.0, 0});
    r.checks.push_back(bounded("chain vs exact law (TV)", chain_tv(seed), 0.02));
    r.checks.push_back(bounded("endpoint histogram vs limit density (L1)", limit_shape_l1(seed), 0.05));
    r.checks.push_back(bounded("density mass", mass_error(rng), 1e-8));
    r.checks.push_back(bounded("degenerations (scaled by tolerance)", degeneration_error(), 1));
    r.checks.push_back(bounded("resolvent vs closed forms (scaled by tolerance)", resolvent_error(), 1));
    r.checks.push_back(bounded("slopes vs densities (scaled by tolerance)", burgers_error(rng), 1));
    r.checks.push_back(bounded("triangle and tsscpp identities", tsscpp_error(), 1e-12));
    return r;
}

std::string to_text(const Report& r)
{
    std::string out;
    char buf[256];
    for (const auto& c : r.checks) {
        std::snprintf(buf, sizeof buf, "%s  %-52s measured %-12.4g tolerance %.3g\n", c.passed ? "PASS" : "FAIL",
                      c.name.c_str(), c.measured, c.tolerance);
        out += buf;
    }
    return out;
}

std::string to_json(const Report& r)
{
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"status", c.passed ? "pass" : "fail"},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance}});
    return nlohmann::json{{"checks", checks}, {"exit_code", r.exit_code()}}.dump(2) + "\n";
}

}  // namespace freebound::cli
