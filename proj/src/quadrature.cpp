#include "freebound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace freebound {

namespace {

constexpr double xgk[11] = {0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
                            0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
                            0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
                            0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
                            0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
                            0.0};
constexpr double wgk[11] = {0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
                            0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
                            0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
                            0.123491976262065851077208977449940, 0.134709217311473325928054001771707,
                            0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
                            0.149445554002916905664936468389821};
constexpr double wg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                          0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                          0.295524224714752870173892994651338};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece rule(const RealFn& f, double a, double b)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double kron = fc * wgk[10], gauss = 0.0;
    for (int j = 0; j < 10; ++j) {
        double dx = h * xgk[j];
        double s = f(c - dx) + f(c + dx);
        kron += wgk[j] * s;
        if (j % 2 == 1) gauss += wg[j / 2] * s;
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadResult integrate_gk(const RealFn& f, double a, double b, const QuadOptions& opt, const std::vector<double>& breaks)
{
    QuadResult res;
    if (a == b) return res;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> pts{a};
    for (double p : breaks)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    std::priority_queue<Piece> heap;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) continue;
        Piece p = rule(f, pts[i], pts[i + 1]);
        res.evaluations += 21;
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int count = static_cast<int>(heap.size());
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (count >= opt.max_intervals || heap.empty()) {
            res.converged = false;
            break;
        }
        Piece p = heap.top();
        double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            res.converged = false;
            break;
        }
        heap.pop();
        Piece l = rule(f, p.a, m), r = rule(f, m, p.b);
        res.evaluations += 42;
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    // re-sum to shed the running-update rounding
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    res.value = sign * total;
    res.error = err;
    return res;
}

double integrate(const RealFn& f, double a, double b, const QuadOptions& opt, const std::vector<double>& breaks)
{
    return integrate_gk(f, a, b, opt, breaks).value;
}

double edge_angle(double u, double a, double b)
{
    double t = std::clamp((u - a) / (b - a), 0.0, 1.0);
    return std::asin(std::sqrt(t));
}

double integrate_edges(const RealFn& f, double a, double b, const QuadOptions& opt, const std::vector<double>& breaks)
{
    if (a == b) return 0.0;
    const double len = b - a;
    std::vector<double> phis;
    for (double p : breaks) phis.push_back(edge_angle(p, a, b));
    auto g = [&](double phi) {
        double s = std::sin(phi);
        return f(a + len * s * s) * len * std::sin(2.0 * phi);
    };
    return integrate(g, 0.0, std::numbers::pi / 2, opt, phis);
}

double integrate_arcsine(const RealFn& g, double a, double b, const QuadOptions& opt, const std::vector<double>& breaks)
{
    const double len = b - a;
    std::vector<double> phis;
    for (double p : breaks) phis.push_back(edge_angle(p, a, b));
    auto h = [&](double phi) {
        double s = std::sin(phi);
        return 2.0 * g(a + len * s * s);
    };
    return integrate(h, 0.0, std::numbers::pi / 2, opt, phis);
}

Nodes chebyshev_nodes(double a, double b, int n)
{
    Nodes nd;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 1; i <= n; ++i) {
        nd.x.push_back(c - h * std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * n)));
        nd.w.push_back(std::numbers::pi / n);
    }
    return nd;
}

}  // namespace freebound
