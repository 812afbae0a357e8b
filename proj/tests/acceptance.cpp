// Acceptance suite: one pass/fail line per criterion; nonzero exit on any
// failure. The criteria and tolerances live in teichflow/selftest.hpp and are
// shared with the CLI selftest subcommand.

#include <chrono>
#include <cstdio>

#include "teichflow/selftest.hpp"

int main() {
    auto start = std::chrono::steady_clock::now();
    auto results = teichflow::run_acceptance();
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        std::printf("[%s] criterion %d: %s -- %s\n", r.pass ? "PASS" : "FAIL", r.index,
                    r.name.c_str(), r.detail.c_str());
    }
    std::printf("%zu checks in %.2fs: %s\n", results.size(), elapsed.count(),
                all ? "ALL PASS" : "FAILURES");
    return all ? 0 : 1;
}
