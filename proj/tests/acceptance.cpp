// Acceptance run: one line per criterion, nonzero exit if any fails.
// Every criterion is backed by a seeded verify suite at its default trial count and the
// default tolerances; the thresholds live in the suites themselves.

#include "quivermorse/verify.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct Criterion {
    int id;
    std::string title;
    std::vector<std::string> suites;
    std::vector<std::string> only;  // property names to count; empty means all of them
    double budget_s;
};

bool selected(const Criterion& c, const std::string& prop) {
    if (c.only.empty()) return true;
    for (const auto& p : c.only)
        if (prop == p || prop.starts_with(p + "-")) return true;
    return false;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "adjointness of rho and d nu (1000 trials, residual <= 1e-9)", {"adjointness"}, {}, 1},
        {2, "block-triangular linearization exact (500 trials, <= 1e-12)", {"linearization"}, {}, 1},
        {3, "index identity h0 - h1 + h2 = <v2,v1>_R (200 samples, margin >= 1e3)", {"index"}, {}, 5},
        {4, "cokernel dimension formula (100 stable samples)", {"cokernel"}, {}, 5},
        {5, "flow behaviour and label agreement (>= 98 of 100)", {"flow"}, {}, 20},
        {6, "slice elements flow to the lower label (50 of 50)", {"adjacent"}, {}, 10},
        {7, "Hessian index matches twice the negative slice (20 points)", {"hessian"}, {}, 10},
        {8, "rank_V = rank_D + rank_T and rank_T formula (50 points)",
         {"transversality"},
         {"rank-sum", "rank-T", "no-errors"},
         5},
        {9, "expansion calculus, relation transfer and surjectivity (50 samples)", {"restriction"}, {}, 5},
        {10, "worked convolution ledger, reproducible, d matches the adjoint rank",
         {"ledger-jordan", "hecke"},
         {"byte-reproducible", "worked-ledger", "d-matches-adjoint", "d-formula-vs-adjoint", "no-errors"},
         2},
    };

    bool all = true;
    double total_s = 0.0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        int checks = 0, failures = 0;
        std::vector<std::string> messages;
        std::string error;
        for (const auto& s : c.suites) {
            qm::VerifyConfig cfg;
            cfg.suite = s;
            try {
                auto r = qm::run_verify_suite(cfg);
                for (const auto& p : r.properties) {
                    if (!selected(c, p.name)) continue;
                    checks += p.checks;
                    failures += p.failures;
                    for (const auto& m : p.messages) messages.push_back(s + ": " + m);
                }
                for (const auto& n : r.notes) messages.push_back(s + " note: " + n);
            } catch (const std::exception& e) {
                error = e.what();
            }
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        total_s += secs;
        bool ok = error.empty() && failures == 0 && checks > 0;
        all = all && ok;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2fs (target %.0fs)", secs, c.budget_s);
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " [" << checks
                  << " checks, " << failures << " failures, " << timing << "]\n";
        if (!error.empty()) std::cout << "    error: " << error << "\n";
        if (!ok)
            for (const auto& m : messages) std::cout << "    " << m << "\n";
    }
    std::printf("total %.2fs (target 60s)\n", total_s);
    return all ? 0 : 1;
}
