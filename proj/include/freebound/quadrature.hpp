#pragma once

#include <functional>
#include <vector>

namespace freebound {

using RealFn = std::function<double(double)>;

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

struct QuadOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

// Adaptive 21-point Gauss-Kronrod on [a, b] with optional interior breakpoints.
QuadResult integrate_gk(const RealFn& f, double a, double b, const QuadOptions& opt = {},
                        const std::vector<double>& breaks = {});
double integrate(const RealFn& f, double a, double b, const QuadOptions& opt = {},
                 const std::vector<double>& breaks = {});

// Integral of f over [a, b] after u = a + (b-a) sin^2(phi); tames square-root edges.
double integrate_edges(const RealFn& f, double a, double b, const QuadOptions& opt = {},
                       const std::vector<double>& breaks = {});

// Integral of g(u) / sqrt((u-a)(b-u)) over [a, b].
double integrate_arcsine(const RealFn& g, double a, double b, const QuadOptions& opt = {},
                         const std::vector<double>& breaks = {});

// Map u in [a,b] to phi in [0, pi/2] (inverse of the sin^2 change of variables).
double edge_angle(double u, double a, double b);

struct Nodes {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Chebyshev (first kind) nodes and weights on [a, b] for the weight 1/sqrt((u-a)(b-u)).
Nodes chebyshev_nodes(double a, double b, int n);

}  // namespace freebound
