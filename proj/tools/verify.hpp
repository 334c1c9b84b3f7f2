#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace freebound::cli {

struct Check {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

struct Report {
    std::vector<Check> checks;
    int exit_code() const;
};

// Reduced-size cross-validation of every module; a few seconds.
Report run_verify(std::uint64_t seed);
std::string to_text(const Report& r);
std::string to_json(const Report& r);

}  // namespace freebound::cli
