#pragma once

// Sequential short-time propagation of W matrix elements along surface-hopping
// trajectories: phase factor, classical-like flow on the mean surface, one
// stochastic transition attempt per step, and the importance-weight bookkeeping.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qclsim/adiabatic.hpp"
#include "qclsim/baths.hpp"
#include "qclsim/models.hpp"
#include "qclsim/rng.hpp"
#include "qclsim/types.hpp"

namespace qclsim {

struct TrajectoryState {
  BathState x;
  Pair pair;
  Complex phase{1.0, 0.0};
  double weight = 1.0;
};

/// phase <- phase * exp(-i dt (omega_start + omega_end) / 2) for the state's pair.
void phase_step(TrajectoryState& state, const AdiabaticFrame& start, const AdiabaticFrame& end,
                double dt);
/// Same with the Bohr frequencies of the pair at both ends given directly.
void phase_step(TrajectoryState& state, double omega_start, double omega_end, double dt);

/// One single-index flip of the current pair.
struct TransitionCandidate {
  Pair target;
  bool first_index = true;  // alpha -> beta (true) or alpha' -> beta' (false)
  Complex raw;              // tau (P/M).conj(d_ab) or tau (P/M).d_a'b'
  double p_jump = 0.0;      // |raw| / (1 + |raw|)
  double q_stay = 1.0;      // 1 / (1 + |raw|)
  double delta_e = 0.0;     // E_old - E_new of the flipped index
  Vector direction;         // Re d of the flipped pair (unnormalised)
};

/// (P_J, Q_NOJ) for a directional factor x: |x|/(1+|x|) and 1/(1+|x|).
std::pair<double, double> jump_probabilities(double magnitude);

/// All 2(n-1) flips of the state's pair. Near-degenerate flips get P_J = 0.
std::vector<TransitionCandidate> transition_probabilities(const TrajectoryState& state,
                                                          const AdiabaticFrame& frame,
                                                          double mass, double dt);

struct Frustrated {};

using JumpResult = std::variant<Vector, Frustrated>;

/// P_perp + d_hat sgn(P.d_hat) sqrt((P.d_hat)^2 + 2 M deltaE); Frustrated when
/// the discriminant is negative. Throws if |d_hat| != 1.
JumpResult momentum_jump(const Vector& p, const Vector& d_hat, double delta_e, double mass);

/// Multiplicative weight of a branch: candidate_count * raw / P_J when jumping,
/// 1 / Q_NOJ when staying.
Complex branch_weight(Complex raw, double p_jump, double q_stay, bool jumped,
                      int candidate_count);

/// Multiplies a complex branch factor into (weight, phase): real factors keep
/// their sign in the weight, otherwise the magnitude goes to the weight and the
/// unit phase to `phase`.
void apply_branch_factor(TrajectoryState& state, Complex factor);

enum class BathKind { hamiltonian, langevin, nose_hoover, nhc };
enum class FrustratedPolicy { reject, reverse };

std::string to_string(BathKind kind);
std::string to_string(FrustratedPolicy policy);
BathKind parse_bath_kind(const std::string& name);
FrustratedPolicy parse_frustrated_policy(const std::string& name);

struct SstpOptions {
  double dt = 1e-3;
  BathKind bath = BathKind::hamiltonian;
  LangevinParams langevin;
  double m_eta = 1.0;
  double m_eta2 = 1.0;
  double temperature = 1.0;
  int n_thermostatted = 1;
  bool transitions = true;
  FrustratedPolicy frustrated = FrustratedPolicy::reject;
};

/// Outcome of the stochastic branch of a step, mainly for tests and counters.
struct BranchRecord {
  bool attempted = false;
  bool jumped = false;
  bool frustrated = false;
  int candidate = -1;
};

/// Steps one trajectory together with its current adiabatic frame; frames are
/// chained so that eigenvector gauges stay continuous along the trajectory.
class SstpPropagator {
 public:
  SstpPropagator(std::shared_ptr<const CanonicalModel> model, SstpOptions options);

  const CanonicalModel& model() const { return *model_; }
  const SstpOptions& options() const { return options_; }

  /// Fresh state with the thermostat variables sized for the bath kind.
  TrajectoryState make_state(const Vector& q, const Vector& p, Pair pair) const;

  AdiabaticFrame frame_at(const Vector& q, const AdiabaticFrame* reference = nullptr) const;

  /// Mean-surface (or thermostatted) flow for the current pair only.
  void bath_step(TrajectoryState& state, AdiabaticFrame& frame, RandomStream& rng) const;

  /// Full step: flow, phase, then the stochastic branch on the new frame.
  BranchRecord step(TrajectoryState& state, AdiabaticFrame& frame, RandomStream& rng) const;

  /// Conserved (or monitored) energy of the trajectory: mean-surface energy,
  /// plus the thermostat terms for Nose and chain baths.
  double energy(const TrajectoryState& state, const AdiabaticFrame& frame) const;

 private:
  BranchRecord branch(TrajectoryState& state, const AdiabaticFrame& frame,
                      RandomStream& rng) const;

  std::shared_ptr<const CanonicalModel> model_;
  SstpOptions options_;
  std::optional<NoseExtension> nose_;
  std::optional<NhcExtension> nhc_;
};

inline constexpr int kStderrBlocks = 10;

struct EnsembleEstimate {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<Complex>> mean;    // [observable][time]
  std::vector<std::vector<double>> std_error;  // [observable][time], from block means of Re
  std::vector<double> mean_abs_weight;
  std::vector<double> energy_drift;  // max over trajectories of relative drift
  std::vector<double> casimir_drift; // spin runs only, else empty
};

/// Partial sums of trajectory contributions. Chunks are filled independently
/// and merged in a fixed order, which makes the result independent of how
/// chunks were scheduled.
class EnsembleAccumulator {
 public:
  EnsembleAccumulator(std::size_t observables, std::size_t times, bool spin = false);

  void add(std::size_t obs, std::size_t t, Complex value);
  void add_weight(std::size_t t, double abs_weight);
  void add_drift(std::size_t t, double energy_drift, double casimir_drift = 0.0);
  void count_trajectory() { ++count_; }

  /// Sums `other` into this accumulator (maxima for drifts).
  void merge(const EnsembleAccumulator& other);

  std::size_t count() const { return count_; }
  const std::vector<Complex>& sums(std::size_t obs) const { return sums_[obs]; }

  std::size_t observables() const { return sums_.size(); }
  std::size_t times() const { return abs_weight_.size(); }

 private:
  friend EnsembleEstimate estimate(const std::vector<EnsembleAccumulator>&,
                                   const std::vector<double>&,
                                   const std::vector<std::string>&);

  std::vector<std::vector<Complex>> sums_;
  std::vector<double> abs_weight_;
  std::vector<double> drift_;
  std::vector<double> casimir_;
  std::size_t count_ = 0;
  bool spin_ = false;
};

/// Combines per-block accumulators (one per stderr block, in block order).
EnsembleEstimate estimate(const std::vector<EnsembleAccumulator>& blocks,
                          const std::vector<double>& times,
                          const std::vector<std::string>& names);

/// Trajectory index range [begin, end) of block b when n trajectories are split
/// into kStderrBlocks contiguous blocks.
std::pair<std::size_t, std::size_t> block_range(std::size_t n, int block);

}  // namespace qclsim
