#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace freebound {

struct Band {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double z) const { return lo <= z && z <= hi; }
};

struct FrozenRegion {
    double lo = 0.0;
    double hi = 0.0;
    double value = 0.0;  // 0 or 1
};

struct LiquidBand {
    Band band;
    std::function<double(double)> rho;
};

// Piecewise density: frozen plateaus plus liquid bands; zero elsewhere.
struct DensityProfile {
    std::vector<FrozenRegion> frozen;
    std::vector<LiquidBand> bands;
    double mass = 1.0;  // declared total mass
    std::string tag;

    double operator()(double z) const;
    Eigen::ArrayXd operator()(const Eigen::ArrayXd& z) const;
    double support_lo() const;
    double support_hi() const;
    std::vector<double> breakpoints() const;
    // Quadrature of the bands plus the frozen-1 lengths.
    double integrate() const;
};

struct QCutGeometry { double alpha, beta; };
struct UniformGeometry { double lambda; };
struct TwoCornerGeometry { double lambda, nu, theta; };
struct HexagonGeometry { double lambda, theta, x; };
struct HalfCutGeometry { double alpha; };
struct TriangleGeometry { double x; };
struct TsscppGeometry { double x; };

using ScaledGeometry = std::variant<QCutGeometry, UniformGeometry, TwoCornerGeometry, HexagonGeometry,
                                    HalfCutGeometry, TriangleGeometry, TsscppGeometry>;

// q-weighted cut hexagon, in mu = -log u coordinates.
Band qcut_band(double alpha, double beta);
double qcut_rho(double mu, double alpha, double beta);
DensityProfile qcut_profile(double alpha, double beta);

// Uniformly weighted cut hexagon with scaled side lambda.
Band uniform_band(double lambda);
double uniform_rho(double t, double lambda);
Eigen::ArrayXd uniform_rho(const Eigen::ArrayXd& t, double lambda);
DensityProfile uniform_profile(double lambda);

enum class TwoCornerRegime { Generic, LowerMerged, UpperMerged, BothMerged, Collapsed };
std::string to_string(TwoCornerRegime r);

struct TwoCornerThresholds {
    double theta_c;        // upper window edge where the band reaches it, given nu
    double nu_c;           // lower window edge where the band reaches it, given theta
    double nu_c_prime;     // lower edge of the unconstrained band
    double theta_c_prime;  // upper edge of the unconstrained band
};
TwoCornerThresholds two_corner_thresholds(double lambda, double nu, double theta);
// Endpoints (U -+ sqrt V)/(4 lambda^2) with no regime logic; V may be slightly negative at a = b.
std::array<double, 2> two_corner_endpoints(double lambda, double nu, double theta);
double two_corner_discriminant(double lambda, double nu, double theta);

struct TwoCornerSolution {
    TwoCornerRegime regime;
    Band band;
    DensityProfile profile;
};
// Allowed endpoint window [nu, theta] inside [0, lambda+1].
TwoCornerSolution two_corner_solution(double lambda, double nu, double theta);

enum class HexagonCase { I, II, III, IV, V, VI };
std::string to_string(HexagonCase c);

Band hexagon_band(double lambda, double theta, double x);
// Slice parameters where the band touches a side: 0, x2, x3, x4, x5, lambda+theta.
std::array<double, 6> hexagon_touch_points(double lambda, double theta);
HexagonCase hexagon_case(double lambda, double theta, double x);

struct HexagonSolution {
    HexagonCase which;
    Band band;
    DensityProfile profile;
};
HexagonSolution hexagon_solution(double lambda, double theta, double x);
double hexagon_rho(double z, double lambda, double theta, double x);

// Max residual of the eight min/max identities and of the six square identities.
double hexagon_minmax_residual(double lambda, double theta, double x);
double hexagon_square_residual(double lambda, double theta, double x);

Band halfcut_band(double alpha);
double halfcut_rho(double z, double alpha);
DensityProfile halfcut_profile(double alpha);

double exitile(double z);
double entertile(double z);
double triangle_rho(double z, double x);
double tsscpp_rho(double z, double x);

// Rate functional for the uniform and q-weighted families.
double rate_functional(const DensityProfile& profile, const ScaledGeometry& geom);

}  // namespace freebound
