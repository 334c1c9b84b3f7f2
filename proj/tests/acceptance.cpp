#include "freebound/arctic.hpp"
#include "freebound/density.hpp"
#include "freebound/enumeration.hpp"
#include "freebound/resolvent.hpp"
#include "freebound/sampler.hpp"
#include "stats.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>

using namespace freebound;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const Rational q_grid[] = {Rational(1), Rational(2), Rational(1, 2), Rational(5, 3)};

Outcome exact_identities()
{
    long checked = 0, bad = 0;
    for (const auto& q : q_grid)
        for (int k = 1; k <= 3; ++k)
            for (int n = 0; n <= 4; ++n) {
                Region r = Region::cut_hexagon(k, n, q);
                for (const auto& m : all_configs(r)) {
                    Rational d = z_det(r, m);
                    bad += d != z_product(r, m) || d != brute_force_z(r, m);
                    ++checked;
                }
            }
    return {bad == 0, fmt("%ld configurations, %ld mismatches", checked, bad)};
}

Outcome q_symmetry()
{
    const auto& cal = symmetry_calibration();
    long checked = 0, bad = 0;
    for (const auto& q : q_grid)
        for (int k = 1; k <= 4; ++k)
            for (int n = 1; n <= 4; ++n) {
                Region r = Region::cut_hexagon(k, n, q);
                for (const auto& m : all_configs(r)) {
                    bad += q_symmetry_residual(r, m) != 0;
                    ++checked;
                }
            }
    return {bad == 0 && cal.fit_exact,
            fmt("%ld nonzero residuals of %ld; exponent %s; printed exponent matched: %s", bad, checked,
                cal.formula().c_str(), cal.printed_matches ? "yes" : "no")};
}

Outcome sampler_tv()
{
    double worst = 0;
    std::uint64_t seed = 100;
    for (auto [k, n] : {std::pair{2, 3}, {3, 3}})
        for (const Rational& q : {Rational(1), Rational(2)}) {
            Region r = Region::cut_hexagon(k, n, q);
            std::map<Config, long> counts;
            long samples = 0;
            mcmc_run(r, 1000000, 100000, ++seed, [&](const Config& m) {
                ++counts[m];
                ++samples;
            });
            worst = std::max(worst, teststats::total_variation(counts, samples, exact_distribution(r)));
        }
    return {worst < 0.01, fmt("max TV %.5f (< 0.01)", worst)};
}

Outcome limit_shape()
{
    Region r = Region::cut_hexagon(60, 60, 1);
    // 120 sites, 3 per bin
    Histogram h = make_histogram(r, 40, 1.0 / 60);
    mcmc_run(r, 10000000, 1000000, 2024, [&](const Config& m) { h.add(m, r.lowest()); }, 100);
    // oracle: bin averages of the closed form by midpoint sums
    double l1 = 0;
    for (std::size_t b = 0; b < h.bins(); ++b) {
        double avg = 0;
        const int sub = 2000;
        for (int i = 0; i < sub; ++i) avg += uniform_rho(h.edges[b] + h.width(b) * (i + 0.5) / sub, 1.0);
        l1 += std::abs(h.height(b) - avg / sub) * h.width(b);
    }
    return {l1 <= 0.05, fmt("L1 %.4f (<= 0.05), %lld recorded states", l1, h.samples)};
}

// plateau value touching z, or fallback
double plateau(const DensityProfile& p, double z, double fallback)
{
    for (const auto& f : p.frozen)
        if (f.hi > f.lo && (std::abs(f.lo - z) < 1e-14 || std::abs(f.hi - z) < 1e-14)) return f.value;
    return fallback;
}

Outcome density_suite()
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0, 1);
    double mass_err = 0, range_err = 0, edge_err = 0;
    auto scan = [&](const DensityProfile& p, double lo, double hi, double mass) {
        mass_err = std::max(mass_err, std::abs(p.integrate() - mass));
        for (int i = 0; i <= 400; ++i) {
            double v = p(lo + (hi - lo) * i / 400.0);
            range_err = std::max({range_err, -v, v - 1});
        }
        for (const auto& b : p.bands) {
            if (b.band.width() <= 0) continue;
            // a band reaching the end of the domain has no edge there
            if (b.band.lo > lo) edge_err = std::max(edge_err, std::abs(b.rho(b.band.lo) - plateau(p, b.band.lo, 0.0)));
            if (b.band.hi < hi) edge_err = std::max(edge_err, std::abs(b.rho(b.band.hi) - plateau(p, b.band.hi, 0.0)));
        }
    };
    for (int i = 0; i < 50; ++i) {
        double lambda = 0.1 + 4 * u(rng);
        auto p = uniform_profile(lambda);
        scan(p, 0, lambda + 1, 1);
        edge_err = std::max({edge_err, uniform_rho(p.bands[0].band.lo, lambda), uniform_rho(p.bands[0].band.hi, lambda)});

        double beta = 0.05 + 3 * u(rng), alpha = 4 * u(rng);
        scan(qcut_profile(alpha, beta), 0, alpha + beta, beta);

        double l2 = 0.2 + 3 * u(rng), nu = l2 * u(rng), theta = nu + 1 + (l2 - nu) * u(rng);
        auto t = two_corner_solution(l2, nu, theta);
        scan(t.profile, 0, l2 + 1, 1);
        if (t.regime == TwoCornerRegime::Generic) {
            edge_err = std::max(edge_err, std::abs(t.profile.bands[0].rho(t.band.lo) - 1));
            edge_err = std::max(edge_err, std::abs(t.profile.bands[0].rho(t.band.hi) - 1));
        }

        double th = 0.1 + 2 * u(rng), la = th + 3 * u(rng), x = (la + th) * u(rng);
        scan(hexagon_solution(la, th, x).profile, std::max(0.0, x - la), 1 + std::min(x, th), 1);

        double a = 4 * u(rng);
        scan(halfcut_profile(a), 0, a + 1, 1);
    }
    bool ok = mass_err < 1e-8 && range_err <= 1e-14 && edge_err < 1e-10;
    return {ok, fmt("mass %.2e, range excess %.2e, edge %.2e over 50 draws x 5 families", mass_err,
                    std::max(range_err, 0.0), edge_err)};
}

Outcome degenerations()
{
    double tc = 0, hx = 0, qc = 0, hc = 0;
    for (double lambda : {0.5, 1.0, 2.0, 3.0}) {
        Band ub = uniform_band(lambda);
        double top = std::min(ub.hi + 0.05, lambda + 1);
        auto s = two_corner_solution(lambda, 0.0, top);
        for (int i = 0; i <= 200; ++i) {
            double z = top * i / 200.0;
            tc = std::max(tc, std::abs(s.profile(z) - uniform_rho(z, lambda)));
        }
        Band hb = hexagon_band(lambda, lambda, lambda);
        hx = std::max({hx, std::abs(hb.lo - ub.lo), std::abs(hb.hi - ub.hi)});
        const double beta = 1e-4;
        for (int i = 1; i < 40; ++i) {
            double t = (lambda + 1) * i / 40.0;
            qc = std::max(qc, std::abs(qcut_rho(t * beta, lambda * beta, beta) - uniform_rho(t, lambda)));
        }
        for (int i = 0; i <= 100; ++i) {
            double z = 1.2 * std::sqrt(2 * lambda + 1) * i / 100.0;
            hc = std::max(hc, std::abs(halfcut_rho(z, lambda) - uniform_rho((lambda + 1) / 2 + z / 2, lambda)));
        }
    }
    bool ok = tc < 1e-8 && hx < 1e-12 && qc < 1e-3 && hc < 1e-12;
    return {ok, fmt("two-corner %.1e, hexagon band %.1e, q-cut %.1e, half-cut %.1e", tc, hx, qc, hc)};
}

Outcome resolvent()
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0, 1);
    double ends = 0, dens = 0;
    int unconverged = 0;
    for (int i = 0; i < 10; ++i) {
        double lambda = 0.5 + 2 * u(rng), nu = lambda * u(rng);
        double theta = std::min(nu + 1.05 + (lambda - nu - 0.05) * u(rng), lambda + 1);
        ResolventProblem p{lambda,
                           {{Constraint::Kind::Forbidden, 0, nu}, {Constraint::Kind::Forbidden, theta, lambda + 1}}};
        auto s = solve(p);
        auto c = two_corner_solution(lambda, nu, theta);
        if (!s.converged || s.bands.size() != 1) {
            ++unconverged;
            continue;
        }
        ends = std::max({ends, std::abs(s.bands[0].lo - c.band.lo), std::abs(s.bands[0].hi - c.band.hi)});
        for (int j = 1; j < 50; ++j) {
            double z = nu + (theta - nu) * j / 50.0;
            dens = std::max(dens, std::abs(s.profile(z) - c.profile(z)));
        }
    }
    double kernels = kernel_identities_check().max();
    bool ok = unconverged == 0 && ends < 1e-6 && dens < 1e-4 && kernels < 1e-9;
    return {ok, fmt("endpoints %.1e, density %.1e, kernels %.1e, failed solves %d", ends, dens, kernels, unconverged)};
}

Outcome burgers()
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    double cons = 0;
    for (int i = 0; i < 5; ++i) {
        double theta = 0.2 + 2.8 * u(rng), lambda = theta + 3 * u(rng);
        double t = -theta + (lambda + theta) * (0.02 + 0.96 * u(rng));
        cons = std::max(cons, slope_density_consistency(lambda, theta, t, 50));
    }
    double diag = 0;
    Band b = uniform_band(1);
    for (int i = 0; i < 50; ++i) {
        double x = b.lo + b.width() * (i + 0.5) / 50;
        auto p = slope_field(x, x, 1, 1);
        diag = std::max(diag, std::abs(p.hx + p.hy - uniform_rho(x, 1)));
    }
    double tangency = 0;
    for (auto [l, t] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {3.0, 0.5}, {0.4, 1.7}}) {
        auto q = hexagon_arctic(l, t);
        for (const auto& side : hexagon_sides(l, t)) tangency = std::max(tangency, q.tangency_residual(side));
    }
    for (double l : {1.0, 3.0}) {
        auto q = cuthex_arctic(l);
        for (const auto& side : hexagon_sides(l, l)) tangency = std::max(tangency, q.tangency_residual(side));
    }
    bool ok = cons < 1e-8 && diag < 1e-8 && tangency < 1e-10;
    return {ok, fmt("slope vs density %.1e, diagonal %.1e, tangency %.1e", cons, diag, tangency)};
}

Outcome tsscpp()
{
    double a = 0, b = 0, c = 0;
    for (int i = 0; i <= 1000; ++i) {
        double z = i / 1000.0;
        a = std::max(a, std::abs(exitile(z) - (1 - entertile(z))));
        b = std::max(b, std::abs(triangle_rho(z, 1.0) - exitile(z)));
        c = std::max(c, std::abs(tsscpp_rho(z, z) - entertile(z)));
    }
    return {a < 1e-12 && b < 1e-12 && c < 1e-12, fmt("exit/enter %.1e, triangle %.1e, tsscpp %.1e", a, b, c)};
}

}  // namespace

int main()
{
    struct Criterion {
        const char* name;
        double budget;  // seconds
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"exact identities", 60, exact_identities},
        {"q-symmetry", 30, q_symmetry},
        {"sampler vs exact law", 120, sampler_tv},
        {"finite size vs limit shape", 300, limit_shape},
        {"closed-form densities", 60, density_suite},
        {"degenerations", 60, degenerations},
        {"resolvent vs closed forms", 120, resolvent},
        {"slopes vs densities", 60, burgers},
        {"triangle and tsscpp", 10, tsscpp},
    };
    int failures = 0, index = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass && secs < c.budget;
        failures += !pass;
        std::printf("criterion %d %-28s %s  %s; %.1f s (budget %.0f s)\n", ++index, c.name, pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs, c.budget);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
