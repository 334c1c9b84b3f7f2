#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "freebound/enumeration.hpp"

namespace teststats {

// Regularized upper incomplete gamma Q(s, x).
inline double gamma_q(double s, double x)
{
    if (x <= 0) return 1.0;
    if (x < s + 1) {
        double sum = 1.0 / s, term = sum;
        for (int n = 1; n < 1000; ++n) {
            term *= x / (s + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    double b = x + 1 - s, c = 1e300, d = 1 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -i * (i - s);
        b += 2;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1) < 1e-15) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

inline double chi_square_p(double stat, int dof) { return gamma_q(0.5 * dof, 0.5 * stat); }

// Total variation distance between empirical counts and an exact law.
inline double total_variation(const std::map<freebound::Config, long>& counts, long samples,
                              const freebound::ExactDistribution& d)
{
    double tv = 0.0;
    for (std::size_t i = 0; i < d.configs.size(); ++i) {
        auto it = counts.find(d.configs[i]);
        double emp = it == counts.end() ? 0.0 : double(it->second) / double(samples);
        tv += std::abs(emp - d.probability(i).get_d());
    }
    return 0.5 * tv;
}

}  // namespace teststats
