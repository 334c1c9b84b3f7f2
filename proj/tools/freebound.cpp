#include "freebound/arctic.hpp"
#include "freebound/density.hpp"
#include "freebound/enumeration.hpp"
#include "freebound/resolvent.hpp"
#include "freebound/sampler.hpp"

#include "CLI11.hpp"
#include "json.hpp"
#include "svg.hpp"
#include "verify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace freebound;
using json = nlohmann::json;
using cli::Series;
using cli::write_svg;

namespace {

struct IntervalFlags {
    std::vector<std::string> forbidden, packed;
};

std::pair<double, double> parse_interval(const std::string& text)
{
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("interval '" + text + "' is not lo:hi");
    std::size_t used = 0;
    double lo = 0, hi = 0;
    try {
        lo = std::stod(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("");
        std::string rest = text.substr(colon + 1);
        hi = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("interval '" + text + "' is not lo:hi");
    }
    if (!(lo < hi)) throw std::invalid_argument("interval '" + text + "' needs lo < hi");
    return {lo, hi};
}

// Sites whose cells [m, m+1) * unit fit inside [lo, hi].
Span to_span(const std::pair<double, double>& iv, double unit, long lowest)
{
    long first = static_cast<long>(std::ceil(iv.first / unit - 1e-9)) + lowest;
    long last = static_cast<long>(std::floor(iv.second / unit + 1e-9)) - 1 + lowest;
    if (last < first) throw std::invalid_argument("interval is shorter than one site");
    return {first, last};
}

std::vector<Constraint> to_constraints(const IntervalFlags& f)
{
    std::vector<Constraint> out;
    for (const auto& s : f.forbidden) {
        auto [lo, hi] = parse_interval(s);
        out.push_back({Constraint::Kind::Forbidden, lo, hi});
    }
    for (const auto& s : f.packed) {
        auto [lo, hi] = parse_interval(s);
        out.push_back({Constraint::Kind::Packed, lo, hi});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    return out;
}

json rational_json(const Rational& r) { return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}}; }

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RegionFlags {
    int k = 1, n = 1;
    std::string q = "1";
    bool half_cut = false;
    IntervalFlags intervals;

    double unit() const { return 1.0 / k; }

    Region build() const
    {
        if (k < 1) throw std::invalid_argument("k must be >= 1");
        if (n < 0) throw std::invalid_argument("n must be >= 0");
        Region r = half_cut ? Region::half_cut(k, n) : Region::cut_hexagon(k, n, parse_rational(q));
        if (half_cut && q != "1") throw std::invalid_argument("half-cut hexagon requires q = 1");
        for (const auto& s : intervals.forbidden) r.forbidden.push_back(to_span(parse_interval(s), unit(), r.lowest()));
        for (const auto& s : intervals.packed) r.packed.push_back(to_span(parse_interval(s), unit(), r.lowest()));
        r.validate();
        return r;
    }

    void add_to(CLI::App* app)
    {
        app->add_option("--k", k, "number of paths")->required();
        app->add_option("--n", n, "second side length")->required();
        app->add_option("--q", q, "volume weight, a rational such as 1, 2 or 5/3");
        app->add_flag("--half-cut", half_cut, "half of the cut hexagon (q = 1 only)");
        app->add_option("--forbidden", intervals.forbidden, "forbidden interval lo:hi in scaled units (repeatable)");
        app->add_option("--packed", intervals.packed, "fully packed interval lo:hi in scaled units (repeatable)");
    }
};

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

// ---------------------------------------------------------------- count, distribution

int run_count(const RegionFlags& rf, const std::vector<long>& m, const std::string& method)
{
    Region r = rf.build();
    require_valid(r, m);
    json out = {{"k", r.k}, {"n", r.n}, {"q", rational_json(r.q)}, {"m", m},
                {"region", r.kind == RegionKind::HalfCutHexagon ? "half-cut" : "cut-hexagon"}};
    if (method == "det") {
        out["z"] = rational_json(z_det(r, m));
    } else if (method == "product") {
        out["z"] = rational_json(z_product(r, m));
    } else if (method == "brute") {
        out["z"] = rational_json(brute_force_z(r, m));
    } else {
        Rational d = z_det(r, m), p = z_product(r, m), b = brute_force_z(r, m);
        out["z"] = rational_json(d);
        out["agree"] = d == p && p == b;
        out["z_product"] = rational_json(p);
        out["z_brute"] = rational_json(b);
        std::cout << out.dump(2) << "\n";
        return d == p && p == b ? 0 : 1;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

std::string join_config(const Config& m)
{
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? " " : "") + std::to_string(m[i]);
    return s;
}

int run_distribution(const RegionFlags& rf, const std::string& format, const std::string& path)
{
    Region r = rf.build();
    ExactDistribution d = exact_distribution(r);
    Output out(path);
    if (format == "csv") {
        out.stream() << "m,weight_num,weight_den,prob_num,prob_den\n";
        for (std::size_t i = 0; i < d.configs.size(); ++i) {
            Rational p = d.probability(i);
            out.stream() << join_config(d.configs[i]) << "," << d.weights[i].get_num() << "," << d.weights[i].get_den()
                         << "," << p.get_num() << "," << p.get_den() << "\n";
        }
        return 0;
    }
    json rows = json::array();
    for (std::size_t i = 0; i < d.configs.size(); ++i)
        rows.push_back({{"m", d.configs[i]}, {"weight", rational_json(d.weights[i])},
                        {"probability", rational_json(d.probability(i))}});
    json doc = {{"k", r.k}, {"n", r.n}, {"q", rational_json(r.q)}, {"total", rational_json(d.total)},
                {"configurations", rows}};
    out.stream() << doc.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- densities

struct Curve {
    double lo, hi;
    std::string tag;
    std::function<double(double)> rho;
};

struct DensityFlags {
    std::string model = "uniform";
    double lambda = 1, theta = 1, nu = 0, x = 0.5, alpha = 1, beta = 1;
};

Curve make_curve(const DensityFlags& f)
{
    const auto& m = f.model;
    if (m == "uniform") {
        auto p = uniform_profile(f.lambda);
        return {0, f.lambda + 1, p.tag, p};
    }
    if (m == "qcut") {
        auto p = qcut_profile(f.alpha, f.beta);
        return {0, f.alpha + f.beta, p.tag, p};
    }
    if (m == "two-corner") {
        auto s = two_corner_solution(f.lambda, f.nu, f.theta);
        return {0, f.lambda + 1, to_string(s.regime), s.profile};
    }
    if (m == "hexagon") {
        auto s = hexagon_solution(f.lambda, f.theta, f.x);
        return {std::max(0.0, f.x - f.lambda), 1 + std::min(f.x, f.theta), to_string(s.which), s.profile};
    }
    if (m == "halfcut") {
        auto p = halfcut_profile(f.alpha);
        return {0, f.alpha + 1, p.tag, p};
    }
    if (m == "triangle") {
        triangle_rho(0, f.x);
        double x = f.x;
        return {0, x, "triangle", [x](double z) { return triangle_rho(std::min(z, x), x); }};
    }
    if (m == "tsscpp") {
        tsscpp_rho(f.x, f.x);
        double x = f.x;
        return {x, 0.5 * (1 + x), "tsscpp", [x](double z) { return tsscpp_rho(std::clamp(z, x, 0.5 * (1 + x)), x); }};
    }
    throw std::invalid_argument("unknown model '" + m + "'");
}

std::vector<double> grid_points(double lo, double hi, int n)
{
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    return z;
}

int run_density(const DensityFlags& f, int grid, const std::string& path, const std::string& svg)
{
    Curve c = make_curve(f);
    Output out(path);
    out.stream() << "z,rho,regime_tag\n";
    Series s{"rho", {}};
    for (double z : grid_points(c.lo, c.hi, grid)) {
        double v = c.rho(z);
        out.stream() << format_real(z) << "," << format_real(v) << "," << c.tag << "\n";
        s.points.emplace_back(z, v);
    }
    if (!svg.empty()) write_svg(svg, {s}, f.model + " density (" + c.tag + ")");
    return 0;
}

// ---------------------------------------------------------------- sample

struct SampleFlags {
    long steps = 1000000, burnin = -1, thin = 10;
    int bins = 40;
    std::size_t exact = 0;
};

std::function<double(double)> theory_for(const Region& r, const RegionFlags& rf)
{
    double lambda = double(r.n) / r.k;
    if (r.kind == RegionKind::HalfCutHexagon) return [lambda](double z) { return halfcut_rho(z, lambda); };
    if (r.has_intervals()) {
        if (r.q != 1) throw std::invalid_argument("intervals with q != 1 have no limit density here");
        ResolventProblem p{lambda, to_constraints(rf.intervals)};
        auto sol = std::make_shared<BandSolution>(solve(p));
        return [sol](double z) { return sol->profile(z); };
    }
    if (r.q == 1) return [lambda](double z) { return uniform_rho(z, lambda); };
    // q = exp(-eps): mu = eps * site, k eps -> beta, n eps -> alpha
    double eps = std::abs(std::log(r.q.get_d()));
    double alpha = r.n * eps, beta = r.k * eps;
    bool flip = r.q > 1;
    return [=](double z) {
        double mu = z * r.k * eps;
        return qcut_rho(flip ? alpha + beta - mu : mu, alpha, beta);
    };
}

int run_sample(const RegionFlags& rf, const SampleFlags& sf, std::uint64_t seed, const std::string& path,
               const std::string& svg)
{
    Region r = rf.build();
    if (sf.steps < 0 || sf.thin < 1 || sf.bins < 1) throw std::invalid_argument("steps, thin and bins must be positive");
    Histogram h = make_histogram(r, sf.bins, rf.unit());
    if (sf.exact > 0) {
        for (const auto& m : exact_sampler(r, sf.exact, seed)) h.add(m, r.lowest());
    } else {
        long burnin = sf.burnin < 0 ? sf.steps / 10 : sf.burnin;
        mcmc_run(r, sf.steps, burnin, seed, [&](const Config& m) { h.add(m, r.lowest()); }, sf.thin);
    }
    auto rho = theory_for(r, rf);
    Output out(path);
    out.stream() << "bin_center,empirical,theory,abs_err\n";
    Series emp{"empirical", {}}, th{"theory", {}};
    double l1 = 0;
    for (std::size_t b = 0; b < h.bins(); ++b) {
        double e = h.height(b), t = bin_average(rho, h.edges[b], h.edges[b + 1]);
        out.stream() << format_real(h.center(b)) << "," << format_real(e) << "," << format_real(t) << ","
                     << format_real(std::abs(e - t)) << "\n";
        emp.points.emplace_back(h.center(b), e);
        th.points.emplace_back(h.center(b), t);
        l1 += std::abs(e - t) * h.width(b);
    }
    std::cerr << "samples " << h.samples << ", l1 distance " << l1 << "\n";
    if (!svg.empty()) write_svg(svg, {emp, th}, "endpoint density");
    return 0;
}

// ---------------------------------------------------------------- arctic

int run_arctic(double lambda, double theta, bool cut, int points, const std::string& path, const std::string& svg)
{
    if (points < 3) throw std::invalid_argument("points must be >= 3");
    ConicCurve q = cut ? cuthex_arctic(lambda) : hexagon_arctic(lambda, theta);
    if (cut) theta = lambda;
    Output out(path);
    out.stream() << "x,y\n";
    Series curve{"arctic curve", {}, true};
    for (const auto& p : q.sample(points)) {
        out.stream() << format_real(p.x()) << "," << format_real(p.y()) << "\n";
        curve.points.emplace_back(p.x(), p.y());
    }
    if (!svg.empty()) {
        Series hex{"hexagon", {{0, 0}, {theta, 0}, {1 + theta, 1}, {1 + theta, 1 + lambda}, {1, 1 + lambda}, {0, lambda}},
                   true};
        write_svg(svg, {hex, curve}, "arctic curve", true);
    }
    return 0;
}

// ---------------------------------------------------------------- solve-gap

std::string kind_name(EdgeKind k) { return k == EdgeKind::Saturated ? "saturated" : "void"; }

int run_solve(double lambda, double mass, const IntervalFlags& iv, int nodes, int points, const std::string& csv,
              const std::string& svg)
{
    ResolventProblem p{lambda, to_constraints(iv), mass};
    p.validate();
    BandSolution sol = solve(p, nodes);
    json bands = json::array();
    for (std::size_t i = 0; i < sol.bands.size(); ++i)
        bands.push_back({{"lo", sol.bands[i].lo}, {"hi", sol.bands[i].hi},
                         {"edges", {kind_name(sol.edges[i][0]), kind_name(sol.edges[i][1])}}});
    json frozen = json::array();
    for (const auto& f : sol.frozen) frozen.push_back({{"lo", f.lo}, {"hi", f.hi}, {"rho", f.value}});
    json doc = {{"lambda", lambda},         {"bands", bands},
                {"frozen", frozen},         {"residuals", sol.residuals},
                {"max_residual", sol.max_residual()}, {"converged", sol.converged},
                {"iterations", sol.iterations}, {"notes", sol.notes},
                {"mass", sol.profile.integrate()}};
    std::cout << doc.dump(2) << "\n";
    if (!csv.empty() || !svg.empty()) {
        Series s{"rho", {}};
        std::unique_ptr<Output> out;
        if (!csv.empty()) {
            out = std::make_unique<Output>(csv);
            out->stream() << "z,rho,regime_tag\n";
        }
        for (double z : grid_points(0, p.top(), points)) {
            double v = sol.profile(z);
            if (out) out->stream() << format_real(z) << "," << format_real(v) << ",resolvent\n";
            s.points.emplace_back(z, v);
        }
        if (!svg.empty()) write_svg(svg, {s}, "resolvent density");
    }
    if (!sol.converged) {
        std::cerr << "solver did not converge\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Free-boundary tilings: exact counts, sampling, limit densities and arctic curves"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out_path, svg_path;

    RegionFlags count_region;
    std::vector<long> m;
    std::string method = "det";
    auto* count = app.add_subcommand("count", "weighted count of path families with given endpoints");
    count_region.add_to(count);
    count->add_option("--m", m, "endpoint sites, comma separated")->required()->delimiter(',');
    count->add_option("--method", method, "det, product, brute or all")
        ->check(CLI::IsMember({"det", "product", "brute", "all"}));

    RegionFlags dist_region;
    std::string format = "json";
    auto* dist = app.add_subcommand("distribution", "exact endpoint law");
    dist_region.add_to(dist);
    dist->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    dist->add_option("-o,--out", out_path, "output file");

    RegionFlags sample_region;
    SampleFlags sf;
    auto* sample = app.add_subcommand("sample", "endpoint histogram from the chain against the limit density");
    sample_region.add_to(sample);
    sample->add_option("--steps", sf.steps, "chain steps");
    sample->add_option("--burnin", sf.burnin, "steps discarded first (default steps/10)");
    sample->add_option("--thin", sf.thin, "record every thin-th state");
    sample->add_option("--bins", sf.bins, "histogram bins");
    sample->add_option("--exact", sf.exact, "draw this many exact samples instead of running the chain");
    sample->add_option("--seed", seed, "seed (default from FREEBOUND_SEED)");
    sample->add_option("-o,--out", out_path, "CSV file");
    sample->add_option("--svg", svg_path, "SVG plot");

    DensityFlags df;
    int grid = 201;
    auto* density = app.add_subcommand("density", "closed-form limit density on a grid");
    density->add_option("--model", df.model, "uniform, qcut, two-corner, hexagon, halfcut, triangle, tsscpp")
        ->check(CLI::IsMember({"uniform", "qcut", "two-corner", "hexagon", "halfcut", "triangle", "tsscpp"}));
    density->add_option("--lambda", df.lambda);
    density->add_option("--theta", df.theta);
    density->add_option("--nu", df.nu);
    density->add_option("--x", df.x);
    density->add_option("--alpha", df.alpha);
    density->add_option("--beta", df.beta);
    density->add_option("--grid", grid, "number of points, ends included");
    density->add_option("-o,--out", out_path, "CSV file");
    density->add_option("--svg", svg_path, "SVG plot");

    double arc_lambda = 1, arc_theta = 1;
    bool cut = false;
    int points = 200;
    auto* arctic = app.add_subcommand("arctic", "arctic curve samples");
    arctic->add_option("--lambda", arc_lambda);
    arctic->add_option("--theta", arc_theta);
    arctic->add_flag("--cut", cut, "cut hexagon curve (uses lambda only)");
    arctic->add_option("--points", points, "number of boundary samples");
    arctic->add_option("-o,--out", out_path, "CSV file");
    arctic->add_option("--svg", svg_path, "SVG plot");

    double gap_lambda = 1, mass = 1;
    IntervalFlags gap_iv;
    int nodes = 32, gap_points = 201;
    auto* gap = app.add_subcommand("solve-gap", "bands and density with forbidden or packed intervals");
    gap->add_option("--lambda", gap_lambda);
    gap->add_option("--mass", mass, "total mass");
    gap->add_option("--forbidden", gap_iv.forbidden, "forbidden interval lo:hi (repeatable)");
    gap->add_option("--packed", gap_iv.packed, "fully packed interval lo:hi (repeatable)");
    gap->add_option("--nodes", nodes, "Chebyshev nodes per band");
    gap->add_option("--points", gap_points, "CSV grid points");
    gap->add_option("--csv", out_path, "density CSV");
    gap->add_option("--svg", svg_path, "SVG plot");

    bool report_json = false;
    auto* verify = app.add_subcommand("verify", "cross-validation suite");
    verify->add_flag("--json", report_json, "print the report as JSON");
    verify->add_option("--seed", seed, "seed (default from FREEBOUND_SEED)");

    try {
        seed = default_seed();
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*count) return run_count(count_region, m, method);
        if (*dist) return run_distribution(dist_region, format, out_path);
        if (*sample) return run_sample(sample_region, sf, seed, out_path, svg_path);
        if (*density) return run_density(df, grid, out_path, svg_path);
        if (*arctic) return run_arctic(arc_lambda, arc_theta, cut, points, out_path, svg_path);
        if (*gap) return run_solve(gap_lambda, mass, gap_iv, nodes, gap_points, out_path, svg_path);
        if (*verify) {
            auto report = cli::run_verify(seed);
            std::cout << (report_json ? cli::to_json(report) : cli::to_text(report));
            return report.exit_code();
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
