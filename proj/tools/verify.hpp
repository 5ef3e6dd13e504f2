#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chernlab::cli {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double worst_ratio = 0.0;  // largest observed error / its tolerance; passes at <= 1
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int samples = 1000;  // random SPD tensors / pairs
    int points = 100;    // random interior points per surface
    int expressions = 500;
};

/// Runs every module-level invariant suite at its configured tolerance.
std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options);

}  // namespace chernlab::cli
