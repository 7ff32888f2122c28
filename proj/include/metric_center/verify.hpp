#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace metric_center {

struct VerifyFailure {
    std::size_t index = 0;       // case number
    std::uint64_t case_seed = 0;
    std::string message;
    std::string repro_spec;      // self-contained spec text reproducing the failure
};

struct VerifyReport {
    std::string suite;
    std::size_t cases = 0;
    std::uint64_t seed = 0;
    std::size_t passed = 0;
    std::size_t skipped = 0;  // no valid input drawn within the attempt budget
    std::vector<VerifyFailure> failures;
    std::map<std::string, std::size_t> tally;  // per-suite counters, e.g. case tags seen
    std::string tolerance;
};

std::vector<std::string> verify_suites();

/// Runs `cases` random cases; case i draws from a generator seeded by a hash
/// of (seed, i), so results do not depend on the thread count. `h` overrides
/// the suite's default resolution where one applies. Throws
/// std::invalid_argument for an unknown suite.
VerifyReport run_verify(const std::string& suite, std::size_t cases, std::uint64_t seed,
                        std::optional<double> h = std::nullopt, unsigned threads = 0);

}  // namespace metric_center
