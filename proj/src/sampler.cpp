#include "freebound/sampler.hpp"
#include "freebound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace freebound {

namespace {

// log |1 - q^j| for real q > 0, j != 0
double log_one_minus_pow(double lq, long j)
{
    double t = static_cast<double>(j) * lq;
    return std::max(0.0, t) + std::log(-std::expm1(-std::abs(t)));
}

// log |q^a - q^b|
double log_pow_gap(double lq, long a, long b)
{
    double ta = a * lq, tb = b * lq;
    return std::max(ta, tb) + std::log(-std::expm1(-std::abs(ta - tb)));
}

double log_q_factorial(double lq, long a)
{
    double s = 0.0;
    for (long i = 1; i <= a; ++i) s += log_one_minus_pow(lq, i);
    return s;
}

}  // namespace

double log_weight(const Region& region, const Config& m)
{
    const long k = region.k, n = region.n, N = n + k;
    double s = 0.0;
    if (region.kind == RegionKind::HalfCutHexagon) {
        for (long i = 1; i <= k; ++i) {
            long mi = m[i - 1];
            s += std::lgamma(2.0 * n + 2 * i - 1) - std::lgamma(double(n + mi + k)) - std::lgamma(double(n - mi + k + 1));
        }
        for (long i = 0; i < k; ++i)
            for (long j = i; j < k; ++j) {
                if (j > i) s += std::log(double(m[j] - m[i]));
                s += std::log(double(m[i] + m[j] - 1));
            }
        return s;
    }
    if (region.q == 1) {
        for (long i = 0; i < k; ++i)
            for (long j = i + 1; j < k; ++j) s += std::log(double(m[j] - m[i]));
        for (long i = 1; i <= k; ++i) {
            long mi = m[i - 1];
            s += std::lgamma(double(N - i + 1)) - std::lgamma(double(mi + 1)) - std::lgamma(double(N - mi));
        }
        return s;
    }
    if (region.q <= 0) throw std::invalid_argument("sampling needs q > 0");
    const double lq = std::log(region.q.get_d());
    long twice = 0;
    for (long mi : m) twice += mi * (mi - 2 * k + 1);
    s += double((k + 1) * k * (k - 1) / 6 + twice / 2) * lq;
    for (long i = 0; i < k; ++i)
        for (long j = i + 1; j < k; ++j) s += log_pow_gap(lq, m[i], m[j]);
    for (long i = 1; i <= k; ++i) {
        long mi = m[i - 1];
        s += log_q_factorial(lq, N - i) - log_q_factorial(lq, mi) - log_q_factorial(lq, N - mi - 1);
    }
    return s;
}

Config initial_config(const Region& region)
{
    region.validate();
    Config m;
    std::vector<long> free_sites;
    auto is_packed = [&](long s) {
        for (const auto& p : region.packed)
            if (p.contains(s)) return true;
        return false;
    };
    for (long s = region.lowest(); s <= region.highest(); ++s) {
        if (!region.allowed_site(s)) continue;
        if (is_packed(s)) m.push_back(s);
        else free_sites.push_back(s);
    }
    const long need = region.k - static_cast<long>(m.size());
    if (need < 0 || need > static_cast<long>(free_sites.size()))
        throw std::invalid_argument("region has no valid configuration");
    const double F = static_cast<double>(free_sites.size());
    for (long j = 0; j < need; ++j) {
        auto idx = static_cast<std::size_t>(std::floor((j + 0.5) * F / need));
        m.push_back(free_sites[idx]);
    }
    std::sort(m.begin(), m.end());
    require_valid(region, m);
    return m;
}

Chain::Chain(Region region, std::uint64_t seed) : Chain(region, seed, initial_config(region)) {}

Chain::Chain(Region region, std::uint64_t seed, Config start) : region_(std::move(region))
{
    region_.validate();
    require_valid(region_, start);
    if (region_.q <= 0) throw std::invalid_argument("sampling needs q > 0");
    state_.config = std::move(start);
    state_.rng.seed(seed);
    state_.log_weight = log_weight(region_, state_.config);
    span_ = region_.highest() - region_.lowest() + 1;
    if (region_.q != 1) {
        log_q_ = std::log(region_.q.get_d());
        for (long d = -span_; d <= span_; ++d) q_power_.push_back(std::exp(d * log_q_));
    }
}

bool Chain::pinned(long site) const
{
    for (const auto& p : region_.packed)
        if (p.contains(site)) return true;
    return false;
}

long Chain::neighbour_site(std::size_t i, int dir) const
{
    // next allowed, unpacked site; only forbidden or packed sites may be skipped
    const auto& m = state_.config;
    long s = m[i] + dir;
    while (s >= region_.lowest() && s <= region_.highest()) {
        if (region_.allowed_site(s) && !pinned(s)) break;
        s += dir;
    }
    if (s < region_.lowest() || s > region_.highest()) return -1;
    if (std::binary_search(m.begin(), m.end(), s)) return -1;
    return s;
}

double Chain::log_ratio(std::size_t i, long target) const
{
    const auto& m = state_.config;
    const long k = region_.k, n = region_.n, N = n + k;
    const long from = m[i];
    double prod = 1.0;
    double extra = 0.0;
    if (region_.kind == RegionKind::HalfCutHexagon) {
        for (long j = 0; j < k; ++j) {
            if (j == static_cast<long>(i)) continue;
            prod *= double(std::abs(m[j] - target)) / double(std::abs(m[j] - from));
            prod *= double(m[j] + target - 1) / double(m[j] + from - 1);
        }
        prod *= double(2 * target - 1) / double(2 * from - 1);
        extra = std::lgamma(double(n + from + k)) + std::lgamma(double(n - from + k + 1)) -
                std::lgamma(double(n + target + k)) - std::lgamma(double(n - target + k + 1));
        return std::log(prod) + extra;
    }
    if (region_.q == 1) {
        for (long j = 0; j < k; ++j) {
            if (j == static_cast<long>(i)) continue;
            prod *= double(std::abs(m[j] - target)) / double(std::abs(m[j] - from));
        }
        extra = std::lgamma(double(from + 1)) + std::lgamma(double(N - from)) - std::lgamma(double(target + 1)) -
                std::lgamma(double(N - target));
        return std::log(prod) + extra;
    }
    auto qp = [&](long d) { return q_power_[static_cast<std::size_t>(d + span_)]; };
    for (long j = 0; j < k; ++j) {
        if (j == static_cast<long>(i)) continue;
        prod *= std::abs(1.0 - qp(target - m[j])) / std::abs(1.0 - qp(from - m[j]));
    }
    double twice = double(target * (target - 2 * k + 1) - from * (from - 2 * k + 1));
    extra = 0.5 * twice * log_q_;
    // ratio of 1/([m]! [N-m-1]!) factors
    extra += log_q_factorial(log_q_, from) - log_q_factorial(log_q_, target);
    extra += log_q_factorial(log_q_, N - from - 1) - log_q_factorial(log_q_, N - target - 1);
    if (!std::isfinite(prod)) {
        double s = 0.0;
        for (long j = 0; j < k; ++j) {
            if (j == static_cast<long>(i)) continue;
            s += log_pow_gap(log_q_, m[j], target) - log_pow_gap(log_q_, m[j], from);
        }
        return s + extra;
    }
    return std::log(prod) + extra;
}

bool Chain::step()
{
    auto& st = state_;
    ++st.step_count;
    bool accepted = false;
    const long k = region_.k;
    if (k > 0) {
        std::uniform_int_distribution<long> pick(0, 2 * k - 1);
        long r = pick(st.rng);
        auto i = static_cast<std::size_t>(r / 2);
        int dir = (r % 2) ? 1 : -1;
        if (!pinned(st.config[i])) {
            long target = neighbour_site(i, dir);
            if (target >= 0) {
                double lr = log_ratio(i, target);
                std::uniform_real_distribution<double> u(0.0, 1.0);
                if (lr >= 0.0 || u(st.rng) < std::exp(lr)) {
                    auto& m = st.config;
                    m[i] = target;
                    // a jump over pinned sites changes the endpoint's rank
                    if ((i > 0 && m[i - 1] > target) || (i + 1 < m.size() && m[i + 1] < target))
                        std::sort(m.begin(), m.end());
                    st.log_weight += lr;
                    ++accepted_;
                    accepted = true;
                }
            }
        }
    }
    if (st.step_count % recheck_interval == 0) recheck();
    return accepted;
}

double Chain::recheck()
{
    double fresh = log_weight(region_, state_.config);
    double drift = std::abs(fresh - state_.log_weight) / std::max(1.0, std::abs(fresh));
    max_drift_ = std::max(max_drift_, drift);
    state_.log_weight = fresh;
    return drift;
}

void Chain::run(long steps)
{
    for (long s = 0; s < steps; ++s) step();
}

void mcmc_run(const Region& region, long steps, long burnin, std::uint64_t seed, const ConfigSink& sink, long thin)
{
    if (!(steps > burnin && burnin >= 0)) throw std::invalid_argument("need steps > burnin >= 0");
    if (thin < 1) throw std::invalid_argument("thin must be >= 1");
    Chain chain(region, seed);
    for (long s = 1; s <= steps; ++s) {
        chain.step();
        if (s > burnin && (s - burnin) % thin == 0) sink(chain.config());
    }
}

std::vector<Config> exact_sampler(const Region& region, std::size_t count, std::uint64_t seed)
{
    auto dist = exact_distribution(region);
    std::vector<double> cdf;
    Rational run = 0;
    for (const auto& w : dist.weights) {
        run += w;
        cdf.push_back(Rational(run / dist.total).get_d());
    }
    cdf.back() = 1.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Config> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        double x = u(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        out.push_back(dist.configs[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1))]);
    }
    return out;
}

double Histogram::height(std::size_t b) const
{
    if (samples == 0) throw std::logic_error("empty histogram");
    return double(counts[b]) / (double(samples) * double(sites_per_bin[b]));
}

double Histogram::mass() const
{
    double s = 0.0;
    for (std::size_t b = 0; b < bins(); ++b) s += height(b) * width(b);
    return s;
}

void Histogram::add(const Config& m, long lowest)
{
    if (site_bin.empty())
        for (std::size_t b = 0; b < bins(); ++b) site_bin.insert(site_bin.end(), sites_per_bin[b], b);
    for (long x : m) ++counts[site_bin.at(static_cast<std::size_t>(x - lowest))];
    ++samples;
}

void Histogram::merge(const Histogram& other)
{
    if (other.sites_per_bin != sites_per_bin) throw std::invalid_argument("histograms have different bins");
    for (std::size_t b = 0; b < bins(); ++b) counts[b] += other.counts[b];
    samples += other.samples;
}

Histogram make_histogram(const Region& region, std::size_t bins, double unit)
{
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");
    const long sites = region.highest() - region.lowest() + 1;
    if (static_cast<long>(bins) > sites) bins = static_cast<std::size_t>(sites);
    Histogram h;
    h.unit = unit;
    h.normalization = region.k * unit;
    h.edges.push_back(0.0);
    long prev = 0;
    for (std::size_t b = 1; b <= bins; ++b) {
        long upto = static_cast<long>((static_cast<long long>(b) * sites) / static_cast<long long>(bins));
        h.sites_per_bin.push_back(upto - prev);
        h.edges.push_back(upto * unit);
        prev = upto;
    }
    h.counts.assign(bins, 0);
    return h;
}

Histogram empirical_density(const std::vector<Config>& samples, const Region& region, std::size_t bins, double unit)
{
    if (samples.empty()) throw std::invalid_argument("no samples");
    Histogram h = make_histogram(region, bins, unit);
    for (const auto& m : samples) h.add(m, region.lowest());
    return h;
}

double bin_average(const std::function<double(double)>& rho, double lo, double hi)
{
    QuadOptions opt;
    opt.abs_tol = 1e-11;
    return integrate(rho, lo, hi, opt) / (hi - lo);
}

double l1_distance(const Histogram& h, const std::function<double(double)>& rho)
{
    double s = 0.0;
    for (std::size_t b = 0; b < h.bins(); ++b)
        s += std::abs(h.height(b) - bin_average(rho, h.edges[b], h.edges[b + 1])) * h.width(b);
    return s;
}

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("FREEBOUND_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("FREEBOUND_SEED is not an unsigned integer");
        }
    }
    return 20240601ULL;
}

}  // namespace freebound
