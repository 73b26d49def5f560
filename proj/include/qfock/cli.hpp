#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace qfock {

struct CliOverrides {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

/// Runs one JSON job end to end. Reports go to the job's out_dir (or the
/// override). Returns 0 when every requested check passes, 1 when a
/// check fails, 2 on input errors; nothing is written on exit 2 (all
/// computation happens before the first file is opened).
int run_job(const std::string& job_path, const CliOverrides& overrides,
            std::ostream& out, std::ostream& err);

/// Worker cap from QFOCK_THREADS (>= 1, defaults to the hardware count).
int thread_budget();

}  // namespace qfock
