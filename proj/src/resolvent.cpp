#include "freebound/resolvent.hpp"
#include "freebound/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

namespace freebound {

namespace {

constexpr double pi = std::numbers::pi;

QuadOptions loose()
{
    QuadOptions o;
    o.abs_tol = 1e-12;
    o.rel_tol = 1e-11;
    o.max_intervals = 20000;
    return o;
}

QuadOptions tight()
{
    QuadOptions o;
    o.abs_tol = 1e-14;
    o.rel_tol = 1e-13;
    o.max_intervals = 20000;
    return o;
}

}  // namespace

// ---------------------------------------------------------------- problem

void ResolventProblem::validate() const
{
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    if (!(target_mass > 0 && target_mass <= 1)) throw std::invalid_argument("target mass must lie in (0, 1]");
    double last = 0.0;
    for (const auto& c : intervals) {
        if (!(c.lo < c.hi)) throw std::invalid_argument("interval with lo >= hi");
        if (c.lo < last) throw std::invalid_argument("intervals must be sorted and disjoint");
        if (c.hi > top()) throw std::invalid_argument("interval outside [0, lambda+1]");
        last = c.hi;
    }
    if (packed_length() > target_mass + 1e-12) throw std::invalid_argument("packed intervals exceed the mass");
    double free = 0.0;
    for (const auto& s : free_segments()) free += s.width();
    if (free + packed_length() < target_mass - 1e-12) throw std::invalid_argument("not enough room for the mass");
}

double ResolventProblem::packed_length() const
{
    double s = 0.0;
    for (const auto& c : intervals)
        if (c.kind == Constraint::Kind::Packed) s += c.hi - c.lo;
    return s;
}

std::vector<Band> ResolventProblem::free_segments() const
{
    std::vector<Band> out;
    double at = 0.0;
    for (const auto& c : intervals) {
        if (c.lo > at) out.push_back({at, c.lo});
        at = c.hi;
    }
    if (at < top()) out.push_back({at, top()});
    return out;
}

KernelRoots ResolventProblem::kernel_roots() const
{
    KernelRoots k;
    k.numerator.push_back(0.0);
    k.denominator.push_back(top());
    for (const auto& c : intervals)
        if (c.kind == Constraint::Kind::Packed) {
            k.numerator.push_back(c.hi);
            k.denominator.push_back(c.lo);
        }
    return k;
}

// ---------------------------------------------------------------- principal values

double pv_integral(const std::function<double(double)>& f, const Band& band, double pole)
{
    const double a = band.lo, b = band.hi;
    if (!(a < b)) throw std::invalid_argument("pv_integral needs a non-empty band");
    if (pole == a || pole == b) throw std::invalid_argument("pv_integral pole on a band edge");
    const bool inside = pole > a && pole < b;
    const double fp = f(pole);
    // integral of 1/(sqrt((u-a)(b-u)) (pole-u)): zero inside, closed form outside
    double base = 0.0;
    if (!inside) {
        const double r = std::sqrt((pole - a) * (pole - b));
        base = pole > b ? pi / r : -pi / r;
    }
    auto smooth = [&](double u) {
        double d = pole - u;
        if (d == 0.0) {
            const double h = 1e-6 * (b - a);
            return -(f(pole + h) - f(pole - h)) / (2 * h);
        }
        return (f(u) - fp) / d;
    };
    double prev = 0.0;
    for (int n = 16; n <= (1 << 14); n *= 2) {
        auto nd = chebyshev_nodes(a, b, n);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += nd.w[i] * smooth(nd.x[i]);
        if (n > 16 && std::abs(s - prev) <= 1e-13 * std::max(1.0, std::abs(s))) return s + fp * base;
        prev = s;
    }
    throw std::runtime_error("pv_integral did not converge with " + std::to_string(1 << 14) + " nodes");
}

double first_kernel(double beta)
{
    return 2 * pi * std::log((std::sqrt(beta) + std::sqrt(beta + 1)) / 2);
}

double second_kernel(double beta)
{
    const double d = std::sqrt(beta) - std::sqrt(beta + 1);
    return pi / 2 * (d * d + 2 * std::log((std::sqrt(beta) + std::sqrt(beta + 1)) / 2));
}

double ab_kernel(double A, double B, double w)
{
    const double s = std::sqrt((1 - w) / w);
    return 2 * (std::atan(s * std::sqrt(B / (1 + B))) - std::atan(s * std::sqrt(A / (1 + A))));
}

double KernelReport::max() const { return std::max({first, second, ab}); }

KernelReport kernel_identities_check(unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> par(0.0, 5.0), unit(0.02, 0.98);
    KernelReport rep;
    const auto opt = tight();
    for (int i = 0; i < 20; ++i) {
        const double beta = i == 0 ? 0.0 : par(rng);
        double q1 = integrate_arcsine([&](double u) { return std::log(beta + u); }, 0.0, 1.0, opt);
        double q2 = integrate_arcsine([&](double u) { return u * std::log(beta + u); }, 0.0, 1.0, opt);
        rep.first = std::max(rep.first, std::abs(q1 - first_kernel(beta)));
        rep.second = std::max(rep.second, std::abs(q2 - second_kernel(beta)));

        const double A = par(rng) + 0.01, B = par(rng) + 0.01, w = unit(rng);
        auto g = [&](double v) { return std::log((A + v) / (B + v)); };
        // value below the cut, matching the sign convention of the closed form
        double lower = -std::sqrt(w * (1 - w)) / pi * pv_integral(g, {0.0, 1.0}, w);
        rep.ab = std::max(rep.ab, std::abs(lower - ab_kernel(A, B, w)));
    }
    return rep;
}

// ---------------------------------------------------------------- solver

namespace {

struct Segment {
    double lo, hi;
};

using MappedFn = std::function<double(double u, double from_lo, double to_hi)>;

// Integral of f / sqrt((u-a)(b-u)) over [a, b] with u = a + (b-a) sin^2 phi.
double arcsine_mapped(const MappedFn& f, double a, double b, const std::vector<double>& breaks, const QuadOptions& opt)
{
    const double len = b - a;
    std::vector<double> phis;
    for (double p : breaks) phis.push_back(edge_angle(p, a, b));
    auto h = [&](double phi) {
        const double s = std::sin(phi), c = std::cos(phi);
        return 2.0 * f(a + len * s * s, len * s * s, len * c * c);
    };
    return integrate(h, 0.0, pi / 2, opt, phis);
}

// Plain integral over [a, b] under the same substitution.
double edges_mapped(const MappedFn& f, double a, double b, const std::vector<double>& breaks, const QuadOptions& opt)
{
    const double len = b - a;
    std::vector<double> phis;
    for (double p : breaks) phis.push_back(edge_angle(p, a, b));
    auto h = [&](double phi) {
        const double s = std::sin(phi), c = std::cos(phi);
        return f(a + len * s * s, len * s * s, len * c * c) * len * std::sin(2.0 * phi);
    };
    return integrate(h, 0.0, pi / 2, opt, phis);
}

// State of one Newton problem: fixed band layout, unknown endpoints.
class Model {
public:
    Model(const ResolventProblem& p, std::vector<Segment> segs, std::vector<std::array<EdgeKind, 2>> kinds,
          std::vector<Segment> fixed_ones)
        : prob_(p), segs_(std::move(segs)), kinds_(std::move(kinds)), fixed_ones_(std::move(fixed_ones))
    {
    }

    int bands() const { return static_cast<int>(segs_.size()); }
    const std::vector<Band>& band_list() const { return bands_; }
    const std::vector<std::array<EdgeKind, 2>>& kinds() const { return kinds_; }
    const std::vector<Segment>& segments() const { return segs_; }

    void set(const Eigen::VectorXd& x)
    {
        bands_.resize(bands());
        for (int j = 0; j < bands(); ++j) bands_[j] = {x[2 * j], x[2 * j + 1]};
        ones_ = fixed_ones_;
        for (int j = 0; j < bands(); ++j) {
            if (kinds_[j][0] == EdgeKind::Saturated) ones_.push_back({segs_[j].lo, bands_[j].lo});
            if (kinds_[j][1] == EdgeKind::Saturated) ones_.push_back({bands_[j].hi, segs_[j].hi});
        }
        std::sort(ones_.begin(), ones_.end(), [](auto& l, auto& r) { return l.lo < r.lo; });
        // glue touching segments so no singular point sits between two of them
        std::vector<Segment> glued;
        for (const auto& s : ones_) {
            if (s.hi == s.lo) continue;
            if (!glued.empty() && glued.back().hi == s.lo)
                glued.back().hi = s.hi;
            else
                glued.push_back(s);
        }
        ones_ = glued;
        singular_.clear();
        singular_.push_back(0.0);
        singular_.push_back(prob_.top());
        for (const auto& s : ones_) {
            singular_.push_back(s.lo);
            singular_.push_back(s.hi);
        }
        ones_length_ = 0.0;
        for (const auto& s : ones_) ones_length_ += s.hi - s.lo;
    }

    double ones_length() const { return ones_length_; }
    const std::vector<Segment>& ones() const { return ones_; }

    // Offsets of mu from the ends of the interval it was sampled in, kept exact near the ends.
    struct Where {
        double mu;
        double lo = std::numeric_limits<double>::quiet_NaN();
        double from_lo = 0.0;
        double hi = std::numeric_limits<double>::quiet_NaN();
        double to_hi = 0.0;
    };

    double W(const Where& w) const
    {
        auto lg = [&](double p) {
            double d = p == w.lo ? w.from_lo : p == w.hi ? -w.to_hi : w.mu - p;
            return std::log(std::max(std::abs(d), 1e-300));
        };
        double s = lg(0.0) - lg(prob_.top());
        for (const auto& o : ones_) s -= lg(o.lo) - lg(o.hi);
        return s;
    }

    double W(double mu) const { return W(Where{mu}); }

    double eps(int j) const { return (bands() - 1 - j) % 2 ? -1.0 : 1.0; }

    double others(int j, double u) const
    {
        double p = 1.0;
        for (int i = 0; i < bands(); ++i)
            if (i != j) p *= std::sqrt(std::abs((u - bands_[i].lo) * (u - bands_[i].hi)));
        return p;
    }

    std::vector<double> breaks_in(int j, std::vector<double> extra = {}) const
    {
        for (double s : singular_)
            if (s > bands_[j].lo && s < bands_[j].hi) extra.push_back(s);
        return extra;
    }

    // sum over bands of integral of g(u) W(u) / (eps r)
    double weighted(const std::function<double(double)>& g) const
    {
        double s = 0.0;
        for (int j = 0; j < bands(); ++j) {
            const Band& b = bands_[j];
            auto f = [&](double u, double dl, double dh) {
                return g(u) * W({u, b.lo, dl, b.hi, dh}) / (eps(j) * others(j, u));
            };
            s += arcsine_mapped(f, b.lo, b.hi, breaks_in(j), tight());
        }
        return s;
    }

    double moment(int k) const
    {
        return weighted([k](double u) { return std::pow(u, k); });
    }

    // W - G at a real point off the bands, with G the resolvent of the band part.
    // Uses 1/R(z) = (1/pi) int du / (eps r (z-u)) to subtract W(x) under the integral.
    double drift(const Where& at) const
    {
        const double x = at.mu, wx = W(at);
        double s = 0.0;
        for (int i = 0; i < bands(); ++i) {
            const Band& b = bands_[i];
            auto f = [&](double u, double dl, double dh) {
                return (W({u, b.lo, dl, b.hi, dh}) - wx) / (eps(i) * others(i, u) * (x - u));
            };
            s += arcsine_mapped(f, b.lo, b.hi, breaks_in(i), loose());
        }
        double r = 1.0;
        int right = 0;
        for (const auto& b : bands_) {
            r *= std::sqrt(std::abs((x - b.lo) * (x - b.hi)));
            if (b.lo > x) ++right;
        }
        return -(right % 2 ? -r : r) * s / pi;
    }

    double density(double x) const
    {
        int j = -1;
        for (int i = 0; i < bands(); ++i)
            if (x >= bands_[i].lo && x <= bands_[i].hi) j = i;
        if (j < 0) return 0.0;
        if (x == bands_[j].lo) return kinds_[j][0] == EdgeKind::Saturated ? 1.0 : 0.0;
        if (x == bands_[j].hi) return kinds_[j][1] == EdgeKind::Saturated ? 1.0 : 0.0;
        const double wx = W(x);
        double s = 0.0;
        for (int i = 0; i < bands(); ++i) {
            const Band& b = bands_[i];
            auto f = [&](double u, double dl, double dh) {
                double d = x - u;
                if (d == 0.0) return 0.0;
                return (W({u, b.lo, dl, b.hi, dh}) - wx) / (eps(i) * others(i, u) * d);
            };
            std::vector<double> br = i == j ? breaks_in(i, {x}) : breaks_in(i);
            s += arcsine_mapped(f, b.lo, b.hi, br, tight());
        }
        const double r = std::sqrt((x - bands_[j].lo) * (bands_[j].hi - x)) * others(j, x);
        return std::clamp(-eps(j) * r * s / (pi * pi), 0.0, 1.0);
    }

    double band_mass() const { return prob_.target_mass - ones_length_; }

    Eigen::VectorXd residual() const
    {
        const int g = bands();
        Eigen::VectorXd F(2 * g);
        for (int k = 0; k < g; ++k) F[k] = moment(k);
        F[g] = moment(g) - pi * band_mass();
        for (int j = 0; j + 1 < g; ++j) {
            const double lo = bands_[j].hi, hi = bands_[j + 1].lo;
            std::vector<double> br;
            for (double s : singular_)
                if (s > lo && s < hi) br.push_back(s);
            auto f = [&](double m, double dl, double dh) { return drift({m, lo, dl, hi, dh}); };
            F[g + 1 + j] = edges_mapped(f, lo, hi, br, loose());
        }
        return F;
    }

    bool admissible(const Eigen::VectorXd& x) const
    {
        for (int j = 0; j < bands(); ++j) {
            if (!(x[2 * j] < x[2 * j + 1])) return false;
            if (j + 1 < bands() && !(x[2 * j + 1] < x[2 * j + 2])) return false;
        }
        return x[0] > -prob_.top() && x[2 * bands() - 1] < 2 * prob_.top();
    }

private:
    ResolventProblem prob_;
    std::vector<Segment> segs_;
    std::vector<std::array<EdgeKind, 2>> kinds_;
    std::vector<Segment> fixed_ones_;
    std::vector<Band> bands_;
    std::vector<Segment> ones_;
    std::vector<double> singular_;
    double ones_length_ = 0.0;
};

struct NewtonResult {
    Eigen::VectorXd x;
    Eigen::VectorXd F;
    int iterations = 0;
    bool converged = false;
};

// Saturated edges are parametrized by the log of their frozen length so they cannot cross their constraint.
Eigen::VectorXd to_unknowns(const Model& m, const Eigen::VectorXd& x)
{
    Eigen::VectorXd y = x;
    for (int j = 0; j < m.bands(); ++j) {
        const auto& seg = m.segments()[j];
        if (m.kinds()[j][0] == EdgeKind::Saturated) y[2 * j] = std::log(std::max(x[2 * j] - seg.lo, 1e-300));
        if (m.kinds()[j][1] == EdgeKind::Saturated) y[2 * j + 1] = std::log(std::max(seg.hi - x[2 * j + 1], 1e-300));
    }
    return y;
}

Eigen::VectorXd to_endpoints(const Model& m, const Eigen::VectorXd& y)
{
    Eigen::VectorXd x = y;
    for (int j = 0; j < m.bands(); ++j) {
        const auto& seg = m.segments()[j];
        if (m.kinds()[j][0] == EdgeKind::Saturated) x[2 * j] = seg.lo + std::exp(y[2 * j]);
        if (m.kinds()[j][1] == EdgeKind::Saturated) x[2 * j + 1] = seg.hi - std::exp(y[2 * j + 1]);
    }
    return x;
}

NewtonResult newton(Model& m, const Eigen::VectorXd& x0, const SolveOptions& opt)
{
    NewtonResult out;
    Eigen::VectorXd y = to_unknowns(m, x0);
    m.set(to_endpoints(m, y));
    Eigen::VectorXd F = m.residual();
    const int n = static_cast<int>(y.size());
    for (int it = 0; it < opt.max_iterations; ++it) {
        out.iterations = it;
        if (F.cwiseAbs().maxCoeff() < opt.tolerance) {
            out.converged = true;
            break;
        }
        const Eigen::VectorXd x = to_endpoints(m, y);
        double scale = 1.0;
        for (int j = 0; j + 1 < n; j += 2) scale = std::min(scale, x[j + 1] - x[j]);
        Eigen::MatrixXd J(n, n);
        for (int c = 0; c < n; ++c) {
            const bool logged = x[c] != y[c];
            const double h = logged ? 1e-6 : 1e-6 * std::max(scale, 1e-4);
            Eigen::VectorXd yp = y, ym = y;
            yp[c] += h;
            ym[c] -= h;
            m.set(to_endpoints(m, yp));
            Eigen::VectorXd Fp = m.residual();
            m.set(to_endpoints(m, ym));
            Eigen::VectorXd Fm = m.residual();
            J.col(c) = (Fp - Fm) / (2 * h);
        }
        Eigen::VectorXd step = J.fullPivLu().solve(-F);
        double t = 1.0;
        bool moved = false;
        for (int k = 0; k < 40; ++k, t *= 0.5) {
            Eigen::VectorXd trial = y + t * step;
            Eigen::VectorXd xt = to_endpoints(m, trial);
            if (!trial.allFinite() || !m.admissible(xt)) continue;
            m.set(xt);
            Eigen::VectorXd Ft = m.residual();
            if (Ft.allFinite() && Ft.norm() < F.norm() * (1 - 1e-4 * t)) {
                y = trial;
                F = Ft;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    out.x = to_endpoints(m, y);
    m.set(out.x);
    out.F = F;
    out.converged = out.converged || F.cwiseAbs().maxCoeff() < opt.tolerance;
    return out;
}

struct Layout {
    std::vector<Segment> segs;
    std::vector<std::array<EdgeKind, 2>> kinds;
    std::vector<Segment> fixed_ones;  // packed intervals and fully saturated segments
    std::vector<Segment> empty;       // fully void free segments
};

EdgeKind adjacency(const ResolventProblem& p, double at)
{
    for (const auto& c : p.intervals)
        if (c.lo == at || c.hi == at) return c.kind == Constraint::Kind::Forbidden ? EdgeKind::Saturated : EdgeKind::Void;
    return EdgeKind::Void;  // end of the domain
}

}  // namespace

double BandSolution::max_residual() const
{
    double m = 0.0;
    for (double r : residuals) m = std::max(m, std::abs(r));
    return m;
}

BandSolution solve(const ResolventProblem& problem, int grid, const SolveOptions& options)
{
    problem.validate();
    if (grid < 1) throw std::invalid_argument("grid must be positive");
    BandSolution sol;

    Layout lay;
    for (const auto& c : problem.intervals)
        if (c.kind == Constraint::Kind::Packed) lay.fixed_ones.push_back({c.lo, c.hi});
    double free_length = 0.0;
    for (const auto& s : problem.free_segments()) free_length += s.width();
    const double band_mass = problem.target_mass - problem.packed_length();
    for (const auto& s : problem.free_segments()) {
        if (band_mass <= 1e-12)
            lay.empty.push_back({s.lo, s.hi});
        else if (free_length <= band_mass + 1e-12)
            lay.fixed_ones.push_back({s.lo, s.hi});
        else {
            lay.segs.push_back({s.lo, s.hi});
            lay.kinds.push_back({adjacency(problem, s.lo), adjacency(problem, s.hi)});
        }
    }
    if (band_mass <= 1e-12) sol.notes.push_back("no liquid mass: free segments frozen at 0");
    else if (free_length <= band_mass + 1e-12) sol.notes.push_back("free segments fully packed");

    Eigen::VectorXd x(2 * lay.segs.size());
    for (std::size_t j = 0; j < lay.segs.size(); ++j) {
        const double c = 0.5 * (lay.segs[j].lo + lay.segs[j].hi), w = lay.segs[j].hi - lay.segs[j].lo;
        x[2 * j] = c - w / 4;
        x[2 * j + 1] = c + w / 4;
    }

    std::shared_ptr<Model> model;
    NewtonResult nr;
    bool settled = lay.segs.empty();
    for (int attempt = 0; attempt <= options.max_flips && !settled; ++attempt) {
        model = std::make_shared<Model>(problem, lay.segs, lay.kinds, lay.fixed_ones);
        nr = newton(*model, x, options);
        sol.iterations += nr.iterations;
        x = nr.x;
        settled = true;

        // collapse bands that shrank to a point
        for (int j = static_cast<int>(lay.segs.size()) - 1; j >= 0; --j) {
            if (x[2 * j + 1] - x[2 * j] >= options.merge_width) continue;
            const bool sat = lay.kinds[j][0] == EdgeKind::Saturated || lay.kinds[j][1] == EdgeKind::Saturated;
            (sat ? lay.fixed_ones : lay.empty).push_back(lay.segs[j]);
            sol.notes.push_back("band in [" + std::to_string(lay.segs[j].lo) + ", " + std::to_string(lay.segs[j].hi) +
                                "] merged");
            lay.segs.erase(lay.segs.begin() + j);
            lay.kinds.erase(lay.kinds.begin() + j);
            Eigen::VectorXd y(x.size() - 2);
            y << x.head(2 * j), x.tail(x.size() - 2 * j - 2);
            x = y;
            settled = false;
        }
        if (!settled) {
            if (lay.segs.empty()) break;
            continue;
        }

        // a saturated edge squeezed onto its constraint, or a void edge pushed past it, has the wrong type
        for (std::size_t j = 0; j < lay.segs.size(); ++j) {
            const double w = lay.segs[j].hi - lay.segs[j].lo;
            const double lo_gap = x[2 * j] - lay.segs[j].lo, hi_gap = lay.segs[j].hi - x[2 * j + 1];
            auto wrong = [&](EdgeKind k, double gap) {
                return k == EdgeKind::Saturated ? (!nr.converged && gap < 1e-9 * w) : gap < -1e-10 * w;
            };
            if (wrong(lay.kinds[j][0], lo_gap)) {
                const bool to_void = lay.kinds[j][0] == EdgeKind::Saturated;
                lay.kinds[j][0] = to_void ? EdgeKind::Void : EdgeKind::Saturated;
                x[2 * j] = lay.segs[j].lo + 1e-3 * w;
                settled = false;
            }
            if (wrong(lay.kinds[j][1], hi_gap)) {
                const bool to_void = lay.kinds[j][1] == EdgeKind::Saturated;
                lay.kinds[j][1] = to_void ? EdgeKind::Void : EdgeKind::Saturated;
                x[2 * j + 1] = lay.segs[j].hi - 1e-3 * w;
                settled = false;
            }
        }
    }
    if (!settled) sol.notes.push_back("edge types did not settle");
    if (!nr.converged && !lay.segs.empty()) sol.notes.push_back("Newton iteration did not converge; best iterate returned");

    if (lay.segs.empty()) {
        model = std::make_shared<Model>(problem, lay.segs, lay.kinds, lay.fixed_ones);
        model->set(Eigen::VectorXd(0));
        double ones = model->ones_length();
        sol.residuals = {ones - problem.target_mass};
        sol.converged = std::abs(sol.residuals[0]) < 1e-10;
    } else {
        sol.residuals.assign(nr.F.data(), nr.F.data() + nr.F.size());
        sol.converged = nr.converged && settled;
        model->set(x);
    }
    if (lay.segs.size() > 1)
        sol.notes.push_back("endpoint count inferred: " + std::to_string(lay.segs.size() + 1) +
                            " large-z conditions plus " + std::to_string(lay.segs.size() - 1) + " gap conditions");

    sol.bands = model->band_list();
    sol.edges = model->kinds();

    // frozen plateaus covering every free segment outside the bands, plus the constraints
    for (const auto& c : problem.intervals)
        sol.frozen.push_back({c.lo, c.hi, c.kind == Constraint::Kind::Packed ? 1.0 : 0.0});
    for (const auto& s : lay.fixed_ones) {
        bool packed = false;
        for (const auto& c : problem.intervals)
            packed = packed || (c.lo == s.lo && c.hi == s.hi && c.kind == Constraint::Kind::Packed);
        if (!packed) sol.frozen.push_back({s.lo, s.hi, 1.0});
    }
    for (const auto& s : lay.empty) sol.frozen.push_back({s.lo, s.hi, 0.0});
    for (std::size_t j = 0; j < sol.bands.size(); ++j) {
        const auto& seg = model->segments()[j];
        const auto& b = sol.bands[j];
        sol.frozen.push_back({seg.lo, std::max(seg.lo, b.lo), sol.edges[j][0] == EdgeKind::Saturated ? 1.0 : 0.0});
        sol.frozen.push_back({std::min(seg.hi, b.hi), seg.hi, sol.edges[j][1] == EdgeKind::Saturated ? 1.0 : 0.0});
    }
    std::erase_if(sol.frozen, [](const FrozenRegion& f) { return !(f.hi > f.lo); });
    std::sort(sol.frozen.begin(), sol.frozen.end(), [](auto& l, auto& r) { return l.lo < r.lo; });

    sol.profile.frozen = sol.frozen;
    sol.profile.mass = problem.target_mass;
    sol.profile.tag = "resolvent";
    std::shared_ptr<const Model> shared = model;
    for (const auto& b : sol.bands) sol.profile.bands.push_back({b, [shared](double z) { return shared->density(z); }});

    for (const auto& b : sol.bands) {
        auto nd = chebyshev_nodes(b.lo, b.hi, grid);
        std::vector<double> vals;
        for (double z : nd.x) vals.push_back(model->density(z));
        sol.density_nodes.push_back(nd.x);
        sol.density_grid.push_back(vals);
    }
    return sol;
}

}  // namespace freebound
