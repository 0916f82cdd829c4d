#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ikg {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;  // worst defects / values, deterministic per seed
};

/// Names of the built-in verification suites, in reporting order.
const std::vector<std::string>& verify_suite_names();

/// Run one suite by name; throws InputError on an unknown name.
SuiteResult run_verify_suite(const std::string& name, std::uint64_t seed = 12345);

std::vector<SuiteResult> run_all_suites(std::uint64_t seed = 12345);

}  // namespace ikg
