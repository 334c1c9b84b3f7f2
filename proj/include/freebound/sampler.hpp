#pragma once

#include "freebound/enumeration.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace freebound {

// Natural log of the product form, in floating point.
double log_weight(const Region& region, const Config& m);

struct ChainState {
    Config config;
    double log_weight = 0.0;
    std::mt19937_64 rng;
    long step_count = 0;
};

class Chain {
public:
    static constexpr long recheck_interval = 100000;

    Chain(Region region, std::uint64_t seed);
    Chain(Region region, std::uint64_t seed, Config start);

    // One Metropolis proposal; returns true when accepted.
    bool step();
    void run(long steps);

    const Config& config() const { return state_.config; }
    const ChainState& state() const { return state_; }
    const Region& region() const { return region_; }
    long accepted() const { return accepted_; }
    // Largest relative gap seen between the running and the recomputed log weight.
    double max_drift() const { return max_drift_; }
    double recheck();

private:
    double log_ratio(std::size_t i, long target) const;
    long neighbour_site(std::size_t i, int dir) const;
    bool pinned(long site) const;

    Region region_;
    ChainState state_;
    long accepted_ = 0;
    double max_drift_ = 0.0;
    double log_q_ = 0.0;
    std::vector<double> q_power_;  // q^d for d in [-S, S], offset S
    long span_ = 0;
};

// A valid configuration spreading the free endpoints evenly; throws if none exists.
Config initial_config(const Region& region);

using ConfigSink = std::function<void(const Config&)>;

// Emits the state after every `thin`-th step once `burnin` steps have passed.
void mcmc_run(const Region& region, long steps, long burnin, std::uint64_t seed, const ConfigSink& sink,
              long thin = 1);

std::vector<Config> exact_sampler(const Region& region, std::size_t count, std::uint64_t seed);

// Bins are whole groups of endpoint sites; site m occupies [(m-lowest)*unit, (m-lowest+1)*unit).
struct Histogram {
    std::vector<double> edges;
    std::vector<long> sites_per_bin;
    std::vector<long long> counts;
    long long samples = 0;
    double unit = 1.0;
    double normalization = 1.0;  // expected integral of the heights
    std::vector<std::size_t> site_bin;

    std::size_t bins() const { return counts.size(); }
    double width(std::size_t b) const { return edges[b + 1] - edges[b]; }
    double center(std::size_t b) const { return 0.5 * (edges[b] + edges[b + 1]); }
    // Fraction of samples occupying the bin's sites; 1 for a fully packed bin.
    double height(std::size_t b) const;
    double mass() const;
    void add(const Config& m, long lowest);
    void merge(const Histogram& other);
};

Histogram make_histogram(const Region& region, std::size_t bins, double unit);
Histogram empirical_density(const std::vector<Config>& samples, const Region& region, std::size_t bins, double unit);

// Sum over bins of |height - bin average of rho| * width.
double l1_distance(const Histogram& h, const std::function<double(double)>& rho);
double bin_average(const std::function<double(double)>& rho, double lo, double hi);

std::uint64_t default_seed();

}  // namespace freebound
