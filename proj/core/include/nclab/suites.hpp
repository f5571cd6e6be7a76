#pragma once

#include <functional>
#include <string>

#include "nclab/config.hpp"
#include "nclab/report.hpp"

namespace nclab {

// Worker pool size: NCLAB_THREADS when set (positive integer), hardware
// concurrency otherwise.
int worker_count();

// fn(i) for i in [0, n), distributed over the pool.  Completion order is
// unspecified, so callers collect into indexed slots; the first exception
// is rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& fn);

// One paragraph on what the suite verifies and at which tolerances.
std::string describe_suite(const std::string& name);

void run_suite(const std::string& name, const RunConfig& cfg, RunReport& report);

// Validates the config and runs the requested suites in canonical order.
RunReport run_suites(const RunConfig& cfg);

}  // namespace nclab
