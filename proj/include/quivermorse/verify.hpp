#pragma once

#include "quivermorse/tolerances.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qm {

struct VerifyConfig {
    std::string suite = "all";
    std::uint64_t seed = 1;
    int trials = 0;  // 0 selects the suite default
    int start = 0;   // index of the first trial; trial i always uses the stream (seed, suite, i)
    Tolerances tol;
    std::map<std::string, double> overrides;  // echoed into reproduction commands
};

struct PropertyResult {
    std::string name;
    int checks = 0;
    int failures = 0;
    double worst = 0.0;  // largest observed value of the checked quantity
    double bound = 0.0;
    double min_margin = -1.0;  // smallest reported rank/spectral margin, -1 if none
    std::vector<std::string> messages;  // first few failures, each with a reproduction command

    bool passed() const { return failures == 0; }
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    int start = 0;
    int trials = 0;
    int rejected = 0;  // samples discarded for insufficient margins and redrawn
    std::vector<PropertyResult> properties;
    std::vector<std::string> notes;

    bool passed() const;
};

std::vector<std::string> known_suites();
bool is_known_suite(const std::string& name);
int default_trials(const std::string& suite);

/// Runs one named suite; "all" is expanded by run_verify. Throws InvalidParameter for unknown names.
SuiteReport run_verify_suite(const VerifyConfig& cfg);
std::vector<SuiteReport> run_verify(const VerifyConfig& cfg);

nlohmann::json to_json(const SuiteReport& r);

} // namespace qm
