#include "freebound/density.hpp"
#include "freebound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freebound {

namespace {

constexpr double pi = std::numbers::pi;

// atan(s * c) with s possibly infinite and c possibly zero.
double arctan_scaled(double s, double c)
{
    if (c == 0.0) return 0.0;
    if (std::isinf(s)) return pi / 2;
    return std::atan(s * c);
}

double safe_sqrt(double v) { return std::sqrt(std::max(0.0, v)); }

// sqrt((b-z)/(z-a)); infinite at z = a, zero at z = b
double edge_ratio(double z, double a, double b)
{
    if (z <= a) return std::numeric_limits<double>::infinity();
    if (z >= b) return 0.0;
    return std::sqrt((b - z) / (z - a));
}

// sqrt(num/den) with den -> 0 read as infinity
double ratio_sqrt(double num, double den)
{
    if (den <= 0.0) return num <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return safe_sqrt(num / den);
}

void require(bool ok, const std::string& what)
{
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double DensityProfile::operator()(double z) const
{
    for (const auto& b : bands)
        if (z > b.band.lo && z < b.band.hi) return b.rho(z);
    for (const auto& f : frozen)
        if (z >= f.lo && z <= f.hi) return f.value;
    for (const auto& b : bands)
        if (b.band.contains(z)) return b.rho(z);
    return 0.0;
}

Eigen::ArrayXd DensityProfile::operator()(const Eigen::ArrayXd& z) const
{
    return z.unaryExpr([this](double v) { return (*this)(v); });
}

double DensityProfile::support_lo() const
{
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& f : frozen)
        if (f.value > 0) lo = std::min(lo, f.lo);
    for (const auto& b : bands) lo = std::min(lo, b.band.lo);
    return lo;
}

double DensityProfile::support_hi() const
{
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& f : frozen)
        if (f.value > 0) hi = std::max(hi, f.hi);
    for (const auto& b : bands) hi = std::max(hi, b.band.hi);
    return hi;
}

std::vector<double> DensityProfile::breakpoints() const
{
    std::vector<double> pts;
    for (const auto& f : frozen) {
        pts.push_back(f.lo);
        pts.push_back(f.hi);
    }
    for (const auto& b : bands) {
        pts.push_back(b.band.lo);
        pts.push_back(b.band.hi);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double DensityProfile::integrate() const
{
    double total = 0.0;
    for (const auto& f : frozen) total += f.value * (f.hi - f.lo);
    QuadOptions opt;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-13;
    for (const auto& b : bands)
        if (b.band.width() > 0) total += integrate_edges(b.rho, b.band.lo, b.band.hi, opt);
    return total;
}

// ---------------------------------------------------------------- q-cut

Band qcut_band(double alpha, double beta)
{
    require(beta > 0, "q-cut needs beta > 0");
    require(2 * alpha + beta >= 0, "q-cut needs 2 alpha + beta >= 0");
    const double s = 0.5 * (alpha + beta);
    const double r = std::sqrt(std::sinh(0.5 * beta) * std::sinh(0.5 * (2 * alpha + beta)));
    const double small = std::exp(-s) * (std::cosh(s) - r);
    const double large = std::exp(-s) * (std::cosh(s) + r);
    return {-std::log(large), -std::log(small)};
}

double qcut_rho(double mu, double alpha, double beta)
{
    Band band = qcut_band(alpha, beta);
    if (alpha == 0.0) return mu >= 0.0 && mu <= beta ? 1.0 : 0.0;
    if (mu <= band.lo || mu >= band.hi) return 0.0;
    const double A = band.hi, B = band.lo;
    double ratio = std::sinh(0.5 * (mu - B)) * std::sinh(0.5 * (A - mu)) / (std::sinh(0.5 * A) * std::sinh(0.5 * B));
    return 2.0 / pi * std::atan(std::exp(-0.5 * mu) * safe_sqrt(ratio));
}

DensityProfile qcut_profile(double alpha, double beta)
{
    Band band = qcut_band(alpha, beta);
    DensityProfile p;
    p.mass = beta;
    p.tag = "qcut";
    if (alpha == 0.0) {
        p.frozen.push_back({0.0, beta, 1.0});
        return p;
    }
    p.frozen.push_back({0.0, band.lo, 0.0});
    p.bands.push_back({band, [alpha, beta](double mu) { return qcut_rho(mu, alpha, beta); }});
    p.frozen.push_back({band.hi, alpha + beta, 0.0});
    return p;
}

// ---------------------------------------------------------------- uniform

Band uniform_band(double lambda)
{
    require(lambda > 0, "uniform density needs lambda > 0");
    const double c = 0.5 * (1 + lambda), h = 0.5 * std::sqrt(1 + 2 * lambda);
    return {c - h, c + h};
}

double uniform_rho(double t, double lambda)
{
    Band b = uniform_band(lambda);
    if (t <= b.lo || t >= b.hi) return 0.0;
    return 2.0 / pi * std::atan(2.0 * std::sqrt((t - b.lo) * (b.hi - t)) / lambda);
}

Eigen::ArrayXd uniform_rho(const Eigen::ArrayXd& t, double lambda)
{
    return t.unaryExpr([lambda](double v) { return uniform_rho(v, lambda); });
}

DensityProfile uniform_profile(double lambda)
{
    Band b = uniform_band(lambda);
    DensityProfile p;
    p.tag = "uniform";
    p.frozen.push_back({0.0, b.lo, 0.0});
    p.bands.push_back({b, [lambda](double t) { return uniform_rho(t, lambda); }});
    p.frozen.push_back({b.hi, lambda + 1, 0.0});
    return p;
}

// ---------------------------------------------------------------- two corners

std::string to_string(TwoCornerRegime r)
{
    switch (r) {
    case TwoCornerRegime::Generic: return "generic";
    case TwoCornerRegime::LowerMerged: return "lower-merged";
    case TwoCornerRegime::UpperMerged: return "upper-merged";
    case TwoCornerRegime::BothMerged: return "both-merged";
    case TwoCornerRegime::Collapsed: return "collapsed";
    }
    return "?";
}

TwoCornerThresholds two_corner_thresholds(double lambda, double nu, double theta)
{
    const double l1 = 1 + lambda;
    TwoCornerThresholds t;
    t.theta_c = (l1 + nu + std::sqrt(3 * (1 + 2 * lambda) + (l1 - 2 * nu) * (l1 - 2 * nu))) / 3;
    t.nu_c = (l1 + theta - std::sqrt(3 * (1 + 2 * lambda) + (l1 - 2 * theta) * (l1 - 2 * theta))) / 3;
    t.nu_c_prime = 0.5 * (l1 - std::sqrt(1 + 2 * lambda));
    t.theta_c_prime = 0.5 * (l1 + std::sqrt(1 + 2 * lambda));
    return t;
}

double two_corner_discriminant(double lambda, double nu, double theta)
{
    const double l2 = 2 * lambda;
    return (1 - nu - theta) * (1 - nu + theta) * (1 + nu - theta) * (1 + nu - theta + l2) * (1 - nu + theta + l2) *
           (1 - nu - theta + l2);
}

std::array<double, 2> two_corner_endpoints(double lambda, double nu, double theta)
{
    const double d = nu - theta;
    const double U = (nu + theta) * (1 - d * d) -
                     (lambda + 1) * ((1 - nu - theta) * (1 + 2 * lambda + nu + theta) + 4 * nu * theta);
    const double r = safe_sqrt(two_corner_discriminant(lambda, nu, theta));
    const double den = 4 * lambda * lambda;
    return {(U - r) / den, (U + r) / den};
}

namespace {

// Window [nu, theta] with the upper corner inactive: band [a, theta_c].
struct MergedBand {
    double a, top;
};

MergedBand merged_band(double lambda, double nu)
{
    const double tc = two_corner_thresholds(lambda, nu, 0.0).theta_c;
    const double g = 1 + lambda + nu - tc;
    return {tc * g * g / (lambda * lambda), tc};
}

double merged_rho(double z, double lambda, double nu, double a, double tc)
{
    const double s = edge_ratio(z, a, tc);
    const double inv = z >= tc ? std::numeric_limits<double>::infinity() : (z <= a ? 0.0 : 1.0 / s);
    const double L = lambda + 1;
    return 1 + 2.0 / pi *
                   (arctan_scaled(s, ratio_sqrt(a - nu, tc - nu)) - arctan_scaled(s, ratio_sqrt(a, tc)) -
                    arctan_scaled(inv, ratio_sqrt(L - tc, L - a)));
}

double generic_rho(double z, double lambda, double nu, double theta, double a, double b)
{
    const double s = edge_ratio(z, a, b);
    const double inv = z >= b ? std::numeric_limits<double>::infinity() : (z <= a ? 0.0 : 1.0 / s);
    const double L = lambda + 1;
    return 1 + 2.0 / pi *
                   (arctan_scaled(s, ratio_sqrt(a - nu, b - nu)) - arctan_scaled(s, ratio_sqrt(a, b)) +
                    arctan_scaled(inv, ratio_sqrt(theta - b, theta - a)) - arctan_scaled(inv, ratio_sqrt(L - b, L - a)));
}

}  // namespace

TwoCornerSolution two_corner_solution(double lambda, double nu, double theta)
{
    require(lambda > 0, "two-corner needs lambda > 0");
    require(nu >= 0 && nu < theta && theta <= lambda + 1, "two-corner needs 0 <= nu < theta <= lambda+1");
    require(theta - nu >= 1 - 1e-12, "two-corner needs theta - nu >= 1 (room for all paths)");
    const double L = lambda + 1;
    TwoCornerSolution sol;
    auto& p = sol.profile;
    const auto th = two_corner_thresholds(lambda, nu, theta);

    if (theta - nu - 1 <= 1e-12) {
        sol.regime = TwoCornerRegime::Collapsed;
        auto ab = two_corner_endpoints(lambda, nu, theta);
        double c = 0.5 * (ab[0] + ab[1]);
        sol.band = {c, c};
        p.frozen.push_back({nu, theta, 1.0});
    } else if (nu <= th.nu_c_prime && theta >= th.theta_c_prime) {
        sol.regime = TwoCornerRegime::BothMerged;
        sol.band = uniform_band(lambda);
        p.frozen.push_back({nu, sol.band.lo, 0.0});
        p.bands.push_back({sol.band, [lambda](double t) { return uniform_rho(t, lambda); }});
        p.frozen.push_back({sol.band.hi, theta, 0.0});
    } else if (theta >= th.theta_c) {
        sol.regime = TwoCornerRegime::LowerMerged;
        auto mb = merged_band(lambda, nu);
        sol.band = {mb.a, mb.top};
        p.frozen.push_back({nu, mb.a, 1.0});
        p.bands.push_back({sol.band, [=](double z) { return merged_rho(z, lambda, nu, mb.a, mb.top); }});
        p.frozen.push_back({mb.top, theta, 0.0});
    } else if (nu <= th.nu_c) {
        sol.regime = TwoCornerRegime::UpperMerged;
        const double nu_m = L - theta;  // mirrored window
        auto mb = merged_band(lambda, nu_m);
        sol.band = {L - mb.top, L - mb.a};
        p.frozen.push_back({nu, sol.band.lo, 0.0});
        const Band band = sol.band;
        p.bands.push_back({band, [=](double z) {
                               // snap the mirrored edges so they land exactly on the merged band
                               double m = z >= band.hi ? mb.a : z <= band.lo ? mb.top : L - z;
                               return merged_rho(m, lambda, nu_m, mb.a, mb.top);
                           }});
        p.frozen.push_back({sol.band.hi, theta, 1.0});
    } else {
        sol.regime = TwoCornerRegime::Generic;
        auto ab = two_corner_endpoints(lambda, nu, theta);
        sol.band = {ab[0], ab[1]};
        const double a = ab[0], b = ab[1];
        p.frozen.push_back({nu, a, 1.0});
        p.bands.push_back({sol.band, [=](double z) { return generic_rho(z, lambda, nu, theta, a, b); }});
        p.frozen.push_back({b, theta, 1.0});
    }
    p.tag = to_string(sol.regime);
    return sol;
}

// ---------------------------------------------------------------- hexagon

std::string to_string(HexagonCase c)
{
    switch (c) {
    case HexagonCase::I: return "i";
    case HexagonCase::II: return "ii";
    case HexagonCase::III: return "iii";
    case HexagonCase::IV: return "iv";
    case HexagonCase::V: return "v";
    case HexagonCase::VI: return "vi";
    }
    return "?";
}

namespace {

void check_hexagon(double lambda, double theta, double x)
{
    require(theta > 0 && lambda >= theta, "hexagon needs lambda >= theta > 0");
    require(x >= 0 && x <= lambda + theta, "hexagon needs 0 <= x <= lambda + theta");
}

struct HexagonSwitches {
    bool upper;  // band edge b has passed the upper corner
    bool lower;  // band edge a has passed the lower corner
};

HexagonSwitches hexagon_switches(double lambda, double theta, double x)
{
    auto t = hexagon_touch_points(lambda, theta);
    return {t[1] < x && x < t[3], t[2] < x && x < t[4]};
}

}  // namespace

Band hexagon_band(double lambda, double theta, double x)
{
    check_hexagon(lambda, theta, x);
    const double p = std::sqrt(lambda * (lambda + theta - x));
    const double q = std::sqrt(x * theta * (1 + lambda + theta));
    const double s = lambda + theta;
    return {(p - q) * (p - q) / (s * s), (p + q) * (p + q) / (s * s)};
}

std::array<double, 6> hexagon_touch_points(double lambda, double theta)
{
    return {0.0, theta / (1 + lambda), lambda / (1 + theta), theta * (1 + lambda + theta) / (1 + theta),
            lambda * (1 + lambda + theta) / (1 + lambda), lambda + theta};
}

HexagonCase hexagon_case(double lambda, double theta, double x)
{
    check_hexagon(lambda, theta, x);
    auto sw = hexagon_switches(lambda, theta, x);
    auto t = hexagon_touch_points(lambda, theta);
    if (sw.upper && sw.lower) return HexagonCase::III;
    if (sw.upper) return HexagonCase::II;
    if (sw.lower) return HexagonCase::IV;
    if (x <= t[1]) return HexagonCase::I;
    if (x >= t[4]) return HexagonCase::V;
    return HexagonCase::VI;
}

namespace {

double hexagon_band_rho(double z, double lambda, double theta, double x, double a, double b, HexagonSwitches sw)
{
    const double endU = 1 + std::min(x, theta), farU = 1 + std::max(x, theta);
    const double endL = std::max(0.0, x - lambda), farL = std::min(0.0, x - lambda);
    const double s = edge_ratio(z, a, b);
    const double t1 = arctan_scaled(s, ratio_sqrt(farU - a, farU - b));
    const double t2 = arctan_scaled(s, ratio_sqrt(endU - a, endU - b));
    const double t3 = arctan_scaled(s, ratio_sqrt(a - endL, b - endL));
    const double t4 = arctan_scaled(s, ratio_sqrt(a - farL, b - farL));
    const double c = sw.upper ? 0.0 : 1.0;
    return c + (t1 + (sw.upper ? t2 : -t2) + (sw.lower ? -t3 : t3) - t4) / pi;
}

}  // namespace

HexagonSolution hexagon_solution(double lambda, double theta, double x)
{
    HexagonSolution sol;
    sol.which = hexagon_case(lambda, theta, x);
    sol.band = hexagon_band(lambda, theta, x);
    const auto sw = hexagon_switches(lambda, theta, x);
    const double lo = std::max(0.0, x - lambda), hi = 1 + std::min(x, theta);
    const double a = sol.band.lo, b = sol.band.hi;
    auto& p = sol.profile;
    p.tag = to_string(sol.which);
    p.frozen.push_back({lo, a, sw.lower ? 0.0 : 1.0});
    if (b > a)
        p.bands.push_back({sol.band, [=](double z) { return hexagon_band_rho(z, lambda, theta, x, a, b, sw); }});
    p.frozen.push_back({b, hi, sw.upper ? 0.0 : 1.0});
    return sol;
}

double hexagon_rho(double z, double lambda, double theta, double x)
{
    auto sol = hexagon_solution(lambda, theta, x);
    const double lo = std::max(0.0, x - lambda), hi = 1 + std::min(x, theta);
    require(z >= lo - 1e-12 && z <= hi + 1e-12, "position outside the hexagon slice");
    return sol.profile(z);
}

double hexagon_minmax_residual(double lambda, double theta, double x)
{
    Band band = hexagon_band(lambda, theta, x);
    const double a = band.lo, d = band.width();
    const double gamma = (1 + x - a) / d, beta = a / d, eta = (1 + theta - a) / d, delta = (lambda - x + a) / d;
    const double s = lambda + theta, y = lambda + theta - x, big = 1 + lambda + theta;
    const std::array<std::array<double, 2>, 4> pairs = {{{x * lambda * big, theta * y},
                                                         {lambda * y, x * theta * big},
                                                         {x * lambda, theta * big * y},
                                                         {x * theta, lambda * y * big}}};
    (void)s;
    const std::array<std::array<double, 2>, 4> lhs = {{{std::sqrt(gamma) + safe_sqrt(gamma - 1), std::sqrt(gamma) - safe_sqrt(gamma - 1)},
                                                       {std::sqrt(beta + 1) + std::sqrt(beta), std::sqrt(beta + 1) - std::sqrt(beta)},
                                                       {std::sqrt(eta) + safe_sqrt(eta - 1), std::sqrt(eta) - safe_sqrt(eta - 1)},
                                                       {std::sqrt(delta + 1) + std::sqrt(delta), std::sqrt(delta + 1) - std::sqrt(delta)}}};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double mx = std::max(pairs[i][0], pairs[i][1]), mn = std::min(pairs[i][0], pairs[i][1]);
        const double r = std::pow(mx / mn, 0.25);
        worst = std::max(worst, std::abs(lhs[i][0] - r) / r);
        worst = std::max(worst, std::abs(lhs[i][1] - 1 / r) * r);
    }
    return worst;
}

double hexagon_square_residual(double lambda, double theta, double x)
{
    Band band = hexagon_band(lambda, theta, x);
    const double a = band.lo, b = band.hi;
    const double s = lambda + theta, y = lambda + theta - x, big = 1 + lambda + theta;
    auto sq = [s](double u, double v, int sign) {
        double w = (std::sqrt(u) + sign * std::sqrt(v)) / s;
        return w * w;
    };
    const std::array<std::array<double, 2>, 6> pairs = {{{1 + theta - a, sq(x * lambda, theta * big * y, +1)},
                                                         {1 + theta - b, sq(x * lambda, theta * big * y, -1)},
                                                         {1 + x - a, sq(x * lambda * big, theta * y, +1)},
                                                         {1 + x - b, sq(x * lambda * big, theta * y, -1)},
                                                         {lambda - x + a, sq(x * theta, lambda * y * big, -1)},
                                                         {lambda - x + b, sq(x * theta, lambda * y * big, +1)}}};
    double worst = 0.0;
    for (const auto& p : pairs) worst = std::max(worst, std::abs(p[0] - p[1]));
    return worst;
}

// ---------------------------------------------------------------- half-cut, triangle, tsscpp

Band halfcut_band(double alpha)
{
    require(alpha >= 0, "half-cut needs alpha >= 0");
    if (alpha == 0.0) return {0.0, 1.0};
    return {0.0, std::sqrt(2 * alpha + 1)};
}

double halfcut_rho(double z, double alpha)
{
    require(alpha >= 0, "half-cut needs alpha >= 0");
    require(z >= 0, "half-cut density is defined for z >= 0");
    if (alpha == 0.0) return z <= 1.0 ? 1.0 : 0.0;
    const double r = std::sqrt(2 * alpha + 1);
    if (z >= r) return 0.0;
    return 2.0 / pi * std::atan(std::sqrt((r - z) * (r + z)) / alpha);
}

DensityProfile halfcut_profile(double alpha)
{
    Band b = halfcut_band(alpha);
    DensityProfile p;
    p.tag = "halfcut";
    if (alpha == 0.0) {
        p.frozen.push_back({0.0, 1.0, 1.0});
        return p;
    }
    p.bands.push_back({b, [alpha](double z) { return halfcut_rho(z, alpha); }});
    p.frozen.push_back({b.hi, alpha + 1, 0.0});
    return p;
}

namespace {

constexpr double tile_lo = 1 - 0.86602540378443864676;  // 1 - sqrt(3)/2
constexpr double tile_hi = 1 + 0.86602540378443864676;

}  // namespace

double exitile(double z)
{
    if (z <= tile_lo || z >= tile_hi) return 0.0;
    return 2.0 / pi * std::atan(2.0 * std::sqrt((z - tile_lo) * (tile_hi - z)));
}

double entertile(double z)
{
    if (z <= tile_lo) return 1.0;
    if (z >= tile_hi) return 1.0;
    const double r = 2.0 * std::sqrt((z - tile_lo) * (tile_hi - z));
    return 2.0 / pi * std::atan(1.0 / r);
}

double triangle_rho(double z, double x)
{
    require(x >= 0 && x <= 1, "triangle needs 0 <= x <= 1");
    require(z >= 0 && z <= x, "triangle needs 0 <= z <= x");
    return hexagon_rho(z, 1.0, 1.0, x);
}

double tsscpp_rho(double z, double x)
{
    require(x >= 0 && x <= 1, "tsscpp needs 0 <= x <= 1");
    require(z >= x - 1e-15 && z <= 0.5 * (1 + x) + 1e-15, "tsscpp needs x <= z <= (1+x)/2");
    return 1.0 - hexagon_rho(2.0 - x, 1.0, 1.0, 1.0 + z - x);
}

// ---------------------------------------------------------------- rate functional

namespace {

// x log x - x
double entropy_term(double x) { return x <= 0 ? 0.0 : x * std::log(x) - x; }

double dilog(double y)
{
    if (y == 1.0) return pi * pi / 6;
    if (y > 0.5) return pi * pi / 6 - std::log(y) * std::log1p(-y) - dilog(1 - y);
    double s = 0.0, p = y;
    for (int k = 1; k < 200; ++k) {
        s += p / (double(k) * k);
        p *= y;
        if (p < 1e-18) break;
    }
    return s;
}

// integral_0^x log(1 - e^{-t}) dt
double q_entropy(double x) { return x <= 0 ? 0.0 : dilog(std::exp(-x)) - pi * pi / 6; }

}  // namespace

double rate_functional(const DensityProfile& profile, const ScaledGeometry& geom)
{
    std::function<double(double)> potential;
    std::function<double(double, double)> kernel;
    if (auto u = std::get_if<UniformGeometry>(&geom)) {
        const double L = u->lambda + 1;
        potential = [L](double m) { return entropy_term(m) + entropy_term(L - m); };
        kernel = [](double m, double n) { return std::log(std::abs(m - n)); };
    } else if (auto q = std::get_if<QCutGeometry>(&geom)) {
        const double top = q->alpha + q->beta, beta = q->beta;
        potential = [top, beta](double m) { return 0.5 * m * (m - 2 * beta) + q_entropy(m) + q_entropy(top - m); };
        kernel = [](double m, double n) {
            const double d = std::abs(m - n);
            return -0.5 * (m + n) + std::log(2 * std::sinh(0.5 * d));
        };
    } else {
        throw std::invalid_argument("rate functional is implemented for the uniform and q-weighted families");
    }

    QuadOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-11;
    // all pieces carrying mass
    struct Piece {
        double lo, hi;
        std::function<double(double)> rho;
    };
    std::vector<Piece> pieces;
    for (const auto& f : profile.frozen)
        if (f.value != 0.0 && f.hi > f.lo) {
            double v = f.value;
            pieces.push_back({f.lo, f.hi, [v](double) { return v; }});
        }
    for (const auto& b : profile.bands)
        if (b.band.width() > 0) pieces.push_back({b.band.lo, b.band.hi, b.rho});

    auto inner = [&](double m) {
        double s = 0.0;
        for (const auto& p : pieces)
            s += integrate_edges([&](double n) { return n == m ? 0.0 : kernel(m, n) * p.rho(n); }, p.lo, p.hi, opt, {m});
        return s;
    };
    double linear = 0.0, quadratic = 0.0;
    for (const auto& p : pieces) {
        linear += integrate_edges([&](double m) { return potential(m) * p.rho(m); }, p.lo, p.hi, opt);
        quadratic += integrate_edges([&](double m) { return p.rho(m) * inner(m); }, p.lo, p.hi, opt);
    }
    return linear - 0.5 * quadratic;
}

}  // namespace freebound
