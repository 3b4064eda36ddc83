#pragma once

// Run orchestration: initial sampling from the master stream, trajectories
// fanned out over a worker pool, fixed-order reduction, CSV and metadata output.

#include <cstddef>
#include <iosfwd>
#include <string>

#include "qclsim/config.hpp"
#include "qclsim/sstp.hpp"

namespace qclsim {

/// Trajectories per reduction chunk. Chunks never straddle stderr blocks.
inline constexpr std::size_t kChunkSize = 64;

/// A trajectory produced NaN/Inf or hit a singular configuration.
class TrajectoryFailure : public NumericalError {
 public:
  TrajectoryFailure(std::size_t index, const std::string& what);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Worker count: `requested` if positive, else QCLSIM_THREADS if set, else the
/// hardware concurrency. Never more than `tasks`.
int resolve_threads(int requested, std::size_t tasks);

/// Runs the ensemble and returns the estimate. Results do not depend on
/// `threads`.
EnsembleEstimate simulate(const RunConfig& config, int threads = 0);

/// Column order: t, then <obs>_re, <obs>_im, <obs>_stderr per observable, then
/// mean_abs_weight, energy_drift, casimir_drift (zero outside spin runs).
std::string series_csv(const EnsembleEstimate& estimate);

struct RunOptions {
  int threads = 0;
  std::ostream* log = nullptr;  // diagnostics; defaults to std::cerr
};

/// Simulates and writes <output>/series.csv and <output>/meta.json.
/// Returns 0 on success, 2 for an invalid configuration, 3 on numerical failure.
int run(const RunConfig& config, const RunOptions& options = {});
/// Loads the file first; unreadable or invalid configs return 2.
int run_file(const std::string& path, const RunOptions& options = {});

}  // namespace qclsim
