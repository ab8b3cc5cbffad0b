#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cgm::cli {

// Desk-scale run parameters. Precedence: built-in defaults < environment
// (CGM_SEED, CGM_THREADS) < config file < command-line flags.
struct RunConfig {
    double alpha = 0.5;
    int64_t n = 400;       // horizon
    int64_t replicas = 200;
    uint64_t seed = 1;
    int threads = 0;       // 0 = all cores
    int64_t length = 100000; // chain length for markov/classify
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value document; '#' starts a comment. Unknown keys and
// out-of-range values are rejected with the offending field named.
RunConfig load_config(const std::string& path, RunConfig base);

// Environment defaults, applied before file and flags.
RunConfig apply_environment(RunConfig base);

void validate(const RunConfig& cfg);

} // namespace cgm::cli
