#pragma once

#include <ostream>

#include "config.hpp"

namespace sklern::cli {

enum ExitCode : int {
    kOk = 0,
    kConfig = 1,
    kDegenerate = 2,
    kNumerical = 3,
    kVerifyFailed = 4,
};

int cmd_expand(const RunConfig& cfg, std::ostream& out);
int cmd_solve(const RunConfig& cfg, std::ostream& out);
/// Suites: barrier, corner, sphere, obstruction, xi, expansion.
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);

/// Worker cap from SKLERN_THREADS, else the hardware concurrency.
int worker_count();

} // namespace sklern::cli
