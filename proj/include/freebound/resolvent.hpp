#pragma once

#include "freebound/density.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace freebound {

struct Constraint {
    enum class Kind { Forbidden, Packed };
    Kind kind;
    double lo;
    double hi;
};

// Points of the logarithmic right-hand side Log(prod (mu - n) / prod (mu - d)) fixed by the layout.
struct KernelRoots {
    std::vector<double> numerator;
    std::vector<double> denominator;
};

struct ResolventProblem {
    double lambda = 1.0;
    std::vector<Constraint> intervals;  // disjoint, sorted, inside [0, lambda+1]
    double target_mass = 1.0;

    double top() const { return lambda + 1; }
    void validate() const;
    double packed_length() const;
    // Maximal segments of [0, lambda+1] free of constraints.
    std::vector<Band> free_segments() const;
    KernelRoots kernel_roots() const;
};

// PV integral of f(u) / (sqrt((u-a)(b-u)) (pole - u)) over the band by Gauss-Chebyshev
// with the singular part subtracted analytically. Pole off the band gives the ordinary integral.
double pv_integral(const std::function<double(double)>& f, const Band& band, double pole);

struct KernelReport {
    double first = 0.0;   // Log(beta+u) arcsine moment
    double second = 0.0;  // u Log(beta+u) arcsine moment
    double ab = 0.0;      // boundary value of the Log((A+v)/(B+v)) transform
    double max() const;
};
// Max residuals of the three closed-form kernel integrals over 20 random parameters each.
KernelReport kernel_identities_check(unsigned seed = 7);

// Closed forms behind the report, exposed for tests and the CLI.
double first_kernel(double beta);
double second_kernel(double beta);
double ab_kernel(double A, double B, double w);

enum class EdgeKind { Saturated, Void };

struct SolveOptions {
    int max_iterations = 80;
    double tolerance = 1e-11;
    int max_flips = 8;
    double merge_width = 1e-9;
};

struct BandSolution {
    std::vector<Band> bands;
    std::vector<std::array<EdgeKind, 2>> edges;
    std::vector<FrozenRegion> frozen;
    std::vector<std::vector<double>> density_nodes;
    std::vector<std::vector<double>> density_grid;
    std::vector<double> residuals;
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> notes;
    DensityProfile profile;

    double max_residual() const;
};

// Band endpoints from the large-z conditions and equal chemical potential across gaps,
// density from the boundary value of the resolvent. `grid` is the Chebyshev node count per band.
BandSolution solve(const ResolventProblem& problem, int grid = 32, const SolveOptions& options = {});

}  // namespace freebound
