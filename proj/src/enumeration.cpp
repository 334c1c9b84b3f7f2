#include "freebound/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace freebound {

Region Region::cut_hexagon(int k, int n, Rational q)
{
    Region r;
    r.kind = RegionKind::CutHexagon;
    r.k = k;
    r.n = n;
    r.q = std::move(q);
    return r;
}

Region Region::half_cut(int k, int n)
{
    Region r;
    r.kind = RegionKind::HalfCutHexagon;
    r.k = k;
    r.n = n;
    r.q = 1;
    return r;
}

bool Region::allowed_site(long m) const
{
    if (m < lowest() || m > highest()) return false;
    for (const auto& f : forbidden)
        if (f.contains(m)) return false;
    return true;
}

namespace {

void check_spans(const std::vector<Span>& spans, const Region& r, const char* what)
{
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (spans[i].lo > spans[i].hi)
            throw std::invalid_argument(std::string(what) + " interval has lo > hi");
        if (spans[i].lo < r.lowest() || spans[i].hi > r.highest())
            throw std::invalid_argument(std::string(what) + " interval leaves the endpoint range");
        if (i > 0 && spans[i].lo <= spans[i - 1].hi)
            throw std::invalid_argument(std::string(what) + " intervals must be sorted and disjoint");
    }
}

}  // namespace

void Region::validate() const
{
    if (k < 0) throw std::invalid_argument("k must be >= 0");
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    if (kind == RegionKind::HalfCutHexagon) {
        if (q != 1) throw std::invalid_argument("half-cut hexagon requires q = 1");
        if (has_intervals()) throw std::invalid_argument("half-cut hexagon takes no intervals");
    }
    check_spans(forbidden, *this, "forbidden");
    check_spans(packed, *this, "packed");
    for (const auto& f : forbidden)
        for (const auto& p : packed)
            if (!(f.hi < p.lo || p.hi < f.lo))
                throw std::invalid_argument("forbidden and packed intervals overlap");
}

bool is_valid(const Region& region, const Config& m)
{
    if (static_cast<long>(m.size()) != region.k) return false;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!region.allowed_site(m[i])) return false;
        if (i > 0 && m[i] <= m[i - 1]) return false;
    }
    for (const auto& p : region.packed)
        for (long s = p.lo; s <= p.hi; ++s)
            if (!std::binary_search(m.begin(), m.end(), s)) return false;
    return true;
}

void require_valid(const Region& region, const Config& m)
{
    if (static_cast<long>(m.size()) != region.k)
        throw std::invalid_argument("configuration has " + std::to_string(m.size()) +
                                    " endpoints, region has k = " + std::to_string(region.k));
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i > 0 && m[i] <= m[i - 1]) throw std::invalid_argument("endpoints must be strictly increasing");
        if (!region.allowed_site(m[i]))
            throw std::invalid_argument("endpoint " + std::to_string(m[i]) + " is outside the allowed sites");
    }
    if (!is_valid(region, m)) throw std::invalid_argument("every site of a packed interval must be occupied");
}

std::vector<Config> all_configs(const Region& region, std::size_t limit)
{
    region.validate();
    std::vector<long> sites;
    for (long s = region.lowest(); s <= region.highest(); ++s)
        if (region.allowed_site(s)) sites.push_back(s);
    const long k = region.k;
    if (k > static_cast<long>(sites.size())) return {};
    if (binomial(static_cast<long>(sites.size()), k) > Integer(static_cast<unsigned long>(limit)))
        throw std::length_error("too many configurations to enumerate");

    std::vector<Config> out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t ns = sites.size();
    for (;;) {
        Config m(static_cast<std::size_t>(k));
        for (long i = 0; i < k; ++i) m[i] = sites[idx[i]];
        if (is_valid(region, m)) out.push_back(std::move(m));
        long i = k - 1;
        while (i >= 0 && idx[i] == ns - static_cast<std::size_t>(k - i)) --i;
        if (i < 0) break;
        ++idx[i];
        for (long j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

Rational rational_determinant(std::vector<std::vector<Rational>> rows)
{
    const std::size_t n = rows.size();
    if (n == 0) return 1;
    // clear denominators row by row, then Bareiss on integers
    std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
    Integer scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw std::invalid_argument("matrix is not square");
        Integer l = 1;
        for (const auto& x : rows[i]) l = lcm(l, Integer(x.get_den()));
        for (std::size_t j = 0; j < n; ++j) a[i][j] = rows[i][j].get_num() * (l / rows[i][j].get_den());
        scale *= l;
    }
    int sign = 1;
    Integer prev = 1;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        if (a[p][p] == 0) {
            std::size_t r = p + 1;
            while (r < n && a[r][p] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[p], a[r]);
            sign = -sign;
        }
        for (std::size_t i = p + 1; i < n; ++i) {
            for (std::size_t j = p + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[p][p] - a[i][p] * a[p][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a[p][p];
    }
    return make_rational(sign * a[n - 1][n - 1], scale);
}

namespace {

Integer path_count_half(long n, long i, long m)
{
    return binomial(2 * n, n + m - i) - binomial(2 * n, n + m + i - 1);
}

}  // namespace

Rational z_det(const Region& region, const Config& m)
{
    require_valid(region, m);
    const long k = region.k, n = region.n;
    std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(k), std::vector<Rational>(static_cast<std::size_t>(k)));
    for (long i = 1; i <= k; ++i) {
        for (long j = 0; j < k; ++j) {
            auto& e = rows[i - 1][j];
            if (region.kind == RegionKind::HalfCutHexagon) {
                e = Rational(path_count_half(n, i, m[j]));
            } else {
                long r = m[j] - i + 1;
                e = r < 0 || r > n ? Rational(0) : power(region.q, r * (r - 1) / 2) * q_binomial(n, r, region.q);
            }
        }
    }
    return rational_determinant(std::move(rows));
}

Rational z_product(const Region& region, const Config& m)
{
    require_valid(region, m);
    const long k = region.k, n = region.n;
    const Rational& q = region.q;

    if (region.kind == RegionKind::HalfCutHexagon) {
        Rational z = 1;
        for (long i = 1; i <= k; ++i) {
            long mi = m[i - 1];
            z *= make_rational(factorial(2 * n + 2 * i - 2), factorial(n + mi + k - 1) * factorial(n - mi + k));
        }
        for (long i = 0; i < k; ++i)
            for (long j = i; j < k; ++j) {
                if (j > i) z *= m[j] - m[i];
                z *= m[i] + m[j] - 1;
            }
        return z;
    }

    if (q == 1) {
        Rational z = 1;
        for (long i = 0; i < k; ++i)
            for (long j = i + 1; j < k; ++j) z *= m[j] - m[i];
        for (long i = 1; i <= k; ++i) {
            long mi = m[i - 1];
            z *= make_rational(factorial(n + k - i), factorial(mi) * factorial(n + k - mi - 1));
        }
        return z;
    }
    if (q == 0 || q == -1) throw std::domain_error("product form undefined at q = " + to_string(q));

    long twice = 0;
    for (long mi : m) twice += mi * (mi - 2 * k + 1);
    const long e = (k + 1) * k * (k - 1) / 6 + twice / 2;
    Rational z = power(q, e);
    std::vector<Rational> qm;
    for (long mi : m) qm.push_back(power(q, mi));
    for (long i = 0; i < k; ++i)
        for (long j = i + 1; j < k; ++j) z *= qm[i] - qm[j];
    for (long i = 1; i <= k; ++i) {
        long mi = m[i - 1];
        z *= q_factorial(n + k - i, q) / (q_factorial(mi, q) * q_factorial(n + k - mi - 1, q));
    }
    return z;
}

Config reflect_config(const Region& region, const Config& m)
{
    if (region.kind != RegionKind::CutHexagon || region.has_intervals())
        throw std::invalid_argument("reflection needs a cut hexagon without intervals");
    Config r;
    for (long mi : m) r.push_back(region.highest() - mi);
    std::sort(r.begin(), r.end());
    return r;
}

long printed_symmetry_exponent(long k, long n)
{
    return -(k * k * k - k) / 2 - n * k * (n + k) / 2 + k * (n + k - 1);
}

namespace {

std::array<Rational, SymmetryCalibration::monomials> monomial_row(long k, long n)
{
    Rational K(k), N(n);
    return {Rational(1), K, N, K * K, K * N, N * N, K * K * K, K * K * N, K * N * N, N * N * N};
}

// Solve A x = b exactly (A square, possibly singular: returns least-norm-free particular solution).
std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const std::size_t n = a.size();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t p = row;
        while (p < n && a[p][col] == 0) ++p;
        if (p == n) continue;
        std::swap(a[p], a[row]);
        std::swap(b[p], b[row]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rational f = a[i][col] / a[row][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[row][j];
            b[i] -= f * b[row];
        }
        pivots.push_back(col);
        ++row;
    }
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = b[r] / a[r][pivots[r]];
    return x;
}

// Integer e with q^e == r, if any.
bool exact_log(const Rational& r, const Rational& q, long& e)
{
    if (r <= 0 || q <= 0 || q == 1) return false;
    double est = std::log(r.get_d()) / std::log(q.get_d());
    if (!std::isfinite(est)) return false;
    long guess = std::lround(est);
    for (long d = -1; d <= 1; ++d)
        if (power(q, guess + d) == r) {
            e = guess + d;
            return true;
        }
    return false;
}

SymmetryCalibration calibrate()
{
    SymmetryCalibration cal;
    const Rational q(2);
    std::vector<std::array<Rational, SymmetryCalibration::monomials>> rows;
    std::vector<Rational> rhs;
    for (long k = 1; k <= 4; ++k) {
        for (long n = 1; n <= 4; ++n) {
            Region fwd = Region::cut_hexagon(static_cast<int>(k), static_cast<int>(n), q);
            Region inv = Region::cut_hexagon(static_cast<int>(k), static_cast<int>(n), Rational(1) / q);
            std::set<long> exps, plain;
            for (const auto& m : all_configs(fwd)) {
                Config mb = reflect_config(fwd, m);
                long e = 0;
                if (exact_log(z_det(fwd, m) / z_det(inv, mb), q, e)) exps.insert(e);
                else cal.m_independent = false;
                long e2 = 0;
                if (exact_log(z_det(fwd, m) / z_det(fwd, mb), q, e2)) plain.insert(e2);
                else plain.insert(std::numeric_limits<long>::min());
            }
            if (exps.size() != 1) cal.m_independent = false;
            if (plain.size() != 1) cal.printed_identity_holds = false;
            long s = exps.empty() ? 0 : *exps.begin();
            cal.measured.push_back({k, n, s});
            if (printed_symmetry_exponent(k, n) != s) cal.printed_matches = false;
            rows.push_back(monomial_row(k, n));
            rhs.push_back(Rational(s));
        }
    }
    const int M = SymmetryCalibration::monomials;
    std::vector<std::vector<Rational>> ata(M, std::vector<Rational>(M, Rational(0)));
    std::vector<Rational> atb(M, Rational(0));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int i = 0; i < M; ++i) {
            atb[i] += rows[r][i] * rhs[r];
            for (int j = 0; j < M; ++j) ata[i][j] += rows[r][i] * rows[r][j];
        }
    auto x = solve_exact(ata, atb);
    for (int i = 0; i < M; ++i) cal.coefficients[i] = x[i];
    for (const auto& [k, n, s] : cal.measured) {
        auto row = monomial_row(k, n);
        Rational v = 0;
        for (int i = 0; i < M; ++i) v += row[i] * x[i];
        if (v != s) cal.fit_exact = false;
    }
    return cal;
}

}  // namespace

long SymmetryCalibration::exponent(long k, long n) const
{
    auto row = monomial_row(k, n);
    Rational v = 0;
    for (int i = 0; i < monomials; ++i) v += row[i] * coefficients[i];
    if (v.get_den() != 1) throw std::logic_error("calibrated exponent is not an integer");
    return v.get_num().get_si();
}

std::string SymmetryCalibration::formula() const
{
    static const char* names[monomials] = {"1", "k", "n", "k^2", "k*n", "n^2", "k^3", "k^2*n", "k*n^2", "n^3"};
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < monomials; ++i) {
        if (coefficients[i] == 0) continue;
        if (!first) os << " + ";
        os << "(" << coefficients[i].get_str() << ")*" << names[i];
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

std::string SymmetryCalibration::report() const
{
    std::ostringstream os;
    os << "identity Z(m|q) = q^s Z(mbar|1/q), s = " << formula() << "\n";
    os << "  exponent m-independent: " << (m_independent ? "yes" : "no") << "\n";
    os << "  cubic fit exact on k,n<=4: " << (fit_exact ? "yes" : "no") << "\n";
    os << "  printed form Z(m|q) = q^s Z(mbar|q) holds: " << (printed_identity_holds ? "yes" : "no") << "\n";
    os << "  printed s_{k,n} matches: " << (printed_matches ? "yes" : "no") << "\n";
    return os.str();
}

const SymmetryCalibration& symmetry_calibration()
{
    static const SymmetryCalibration cal = calibrate();
    return cal;
}

Rational q_symmetry_residual(const Region& region, const Config& m)
{
    if (region.q == 0) throw std::invalid_argument("q must be nonzero");
    Config mb = reflect_config(region, m);
    Region inv = region;
    inv.q = Rational(1) / region.q;
    long s = symmetry_calibration().exponent(region.k, region.n);
    return z_det(region, m) - power(region.q, s) * z_det(inv, mb);
}

namespace {

struct Path {
    std::vector<long long> vertices;  // sorted keys
    long weight_exponent = 0;
};

long long key(long x, long y) { return (static_cast<long long>(x) << 32) ^ static_cast<long long>(y & 0xffffffff); }

std::vector<Path> cut_paths(long n, long i, long mi)
{
    // from (i-1, 1-i): n unit steps, right steps count mi - i + 1
    std::vector<Path> out;
    long rights = mi - i + 1;
    if (rights < 0 || rights > n) return out;
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        if (__builtin_popcountl(mask) != rights) continue;
        Path p;
        long x = i - 1, y = 1 - i;
        p.vertices.push_back(key(x, y));
        for (long s = 0; s < n; ++s) {
            if (mask >> s & 1UL) {
                ++x;
                p.weight_exponent += n - 1 - s;
            } else {
                ++y;
            }
            p.vertices.push_back(key(x, y));
        }
        std::sort(p.vertices.begin(), p.vertices.end());
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Path> half_paths(long n, long i, long mi)
{
    // from (0, 2i-2) to (2n, 2mi-2) by +-1 steps, staying at height >= 0
    std::vector<Path> out;
    const long steps = 2 * n;
    for (unsigned long mask = 0; mask < (1UL << steps); ++mask) {
        Path p;
        long y = 2 * i - 2;
        bool ok = true;
        p.vertices.push_back(key(0, y));
        for (long s = 0; s < steps && ok; ++s) {
            y += (mask >> s & 1UL) ? 1 : -1;
            if (y < 0) ok = false;
            p.vertices.push_back(key(s + 1, y));
        }
        if (!ok || y != 2 * mi - 2) continue;
        std::sort(p.vertices.begin(), p.vertices.end());
        out.push_back(std::move(p));
    }
    return out;
}

bool disjoint(const std::vector<long long>& a, const std::vector<long long>& b)
{
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) ++i;
        else ++j;
    }
    return true;
}

}  // namespace

Rational brute_force_z(const Region& region, const Config& m)
{
    require_valid(region, m);
    if (region.k > 3 || region.n > 5) throw std::length_error("brute force limited to k <= 3, n <= 5");
    const long k = region.k, n = region.n;
    std::vector<std::vector<Path>> options;
    for (long i = 1; i <= k; ++i)
        options.push_back(region.kind == RegionKind::HalfCutHexagon ? half_paths(n, i, m[i - 1])
                                                                     : cut_paths(n, i, m[i - 1]));
    Rational total = 0;
    std::vector<const Path*> chosen;
    std::function<void(std::size_t)> walk = [&](std::size_t depth) {
        if (depth == options.size()) {
            long e = 0;
            for (const Path* p : chosen) e += p->weight_exponent;
            total += power(region.q, e);
            return;
        }
        for (const auto& p : options[depth]) {
            bool ok = true;
            for (const Path* c : chosen)
                if (!disjoint(c->vertices, p.vertices)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(&p);
            walk(depth + 1);
            chosen.pop_back();
        }
    };
    walk(0);
    return total;
}

ExactDistribution exact_distribution(const Region& region)
{
    if (region.q <= 0) throw std::invalid_argument("exact distribution needs q > 0");
    ExactDistribution d;
    d.configs = all_configs(region);
    if (d.configs.empty()) throw std::invalid_argument("region has no valid configuration");
    for (const auto& m : d.configs) {
        d.weights.push_back(z_det(region, m));
        d.total += d.weights.back();
    }
    return d;
}

}  // namespace freebound
