#pragma once

#include "freebound/exact.hpp"

#include <array>
#include <string>
#include <vector>

namespace freebound {

enum class RegionKind { CutHexagon, HalfCutHexagon };

// Closed integer range [lo, hi].
struct Span {
    long lo = 0;
    long hi = 0;
    bool contains(long m) const { return lo <= m && m <= hi; }
};

struct Region {
    RegionKind kind = RegionKind::CutHexagon;
    int k = 1;
    int n = 1;
    Rational q = 1;
    std::vector<Span> forbidden;
    std::vector<Span> packed;

    static Region cut_hexagon(int k, int n, Rational q = 1);
    static Region half_cut(int k, int n);

    long lowest() const { return kind == RegionKind::HalfCutHexagon ? 1 : 0; }
    long highest() const { return kind == RegionKind::HalfCutHexagon ? n + k : n + k - 1; }
    bool has_intervals() const { return !forbidden.empty() || !packed.empty(); }
    bool allowed_site(long m) const;

    // Throws std::invalid_argument naming the violated condition.
    void validate() const;
};

using Config = std::vector<long>;

bool is_valid(const Region& region, const Config& m);
void require_valid(const Region& region, const Config& m);

// All valid endpoint configurations in lexicographic order.
std::vector<Config> all_configs(const Region& region, std::size_t limit = 1000000);

Rational rational_determinant(std::vector<std::vector<Rational>> rows);

Rational z_det(const Region& region, const Config& m);
Rational z_product(const Region& region, const Config& m);
Config reflect_config(const Region& region, const Config& m);

// Exponent printed next to the reflection identity.
long printed_symmetry_exponent(long k, long n);

// Exponent s with Z(m|q) = q^s Z(mbar|1/q), measured on k,n <= 4 and fitted
// by a cubic in (k, n).
struct SymmetryCalibration {
    static constexpr int monomials = 10;
    std::array<Rational, monomials> coefficients;  // 1, k, n, k^2, kn, n^2, k^3, k^2 n, k n^2, n^3
    bool m_independent = true;      // ratio Z(m|q)/Z(mbar|1/q) was the same power for every m
    bool fit_exact = true;          // cubic reproduces every measured exponent
    bool printed_matches = true;    // printed exponent equals the measured one everywhere
    bool printed_identity_holds = true;  // Z(m|q)/Z(mbar|q) is m-independent
    std::vector<std::array<long, 3>> measured;  // (k, n, s)

    long exponent(long k, long n) const;
    std::string formula() const;
    std::string report() const;
};

const SymmetryCalibration& symmetry_calibration();

Rational q_symmetry_residual(const Region& region, const Config& m);

// Weighted count of non-intersecting path families by direct enumeration.
Rational brute_force_z(const Region& region, const Config& m);

struct ExactDistribution {
    std::vector<Config> configs;
    std::vector<Rational> weights;
    Rational total = 0;

    Rational probability(std::size_t i) const { return weights[i] / total; }
};

ExactDistribution exact_distribution(const Region& region);

}  // namespace freebound
