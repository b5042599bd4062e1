#pragma once

#include <optional>
#include <vector>

#include "opinionlab/rules.hpp"

namespace opinionlab {

/// Communication protocol. Synchronous: everyone hears every neighbor every
/// period. Scheduled: a cyclic table gives each player's heard-from subset per
/// period; perceptions of unheard neighbors are carried over, and a player
/// whose subset is empty skips the period entirely (opinion unchanged).
struct Protocol {
  enum class Kind { kSynchronous, kScheduled };
  Kind kind = Kind::kSynchronous;
  // heard[t % period()][i] = neighbors i hears this period.
  std::vector<std::vector<std::vector<int>>> schedule;
  int coverage_k = 1;

  int period() const { return static_cast<int>(schedule.size()); }
  static Protocol synchronous() { return Protocol{}; }
};

/// Random schedule in which each player hears one pseudo-randomly chosen slice
/// of its neighbors per period and every neighbor is heard at least once every
/// coverage_k periods.
Protocol random_covering_schedule(const Network& net, int coverage_k, std::uint64_t seed);

/// True iff over every window of coverage_k consecutive periods each player
/// hears all of its neighbors (checked over one full cycle).
bool covers_neighbors(const Protocol& protocol, const Network& net);

enum class RunStatus { kConverged, kMaxedOut, kDiverged };

struct Trajectory {
  RunStatus status = RunStatus::kMaxedOut;
  long steps = 0;          // periods actually run
  Vector y;                // final opinion vector
  std::vector<Vector> path;  // recorded states (y^0..), only when requested
};

struct RunOptions {
  long max_steps = 1'000'000;
  double tol = 1e-10;
  double blowup_threshold = 1e9;
  // Also classify as diverged when step changes stabilize at a nonzero
  // constant (the linear drift of unanchored dynamics under persistent
  // errors). Only meaningful for runs without idiosyncratic noise.
  bool detect_drift = true;
  bool record_path = false;
};

/// One synchronous update from y_prev given this period's idiosyncratic draw.
Vector synchronous_step(const Vector& y_prev, const Network& net, const RuleProfile& rules,
                        const Vector& x, const Vector& xi, const Vector& nu);

/// Iterates the dynamics from y^0 = x until convergence, blowup or max_steps.
/// Convergence requires three consecutive sup-norm step changes below tol and
/// a projected remaining distance below 10 * tol.
Trajectory run(const Network& net, const RuleProfile& rules, const Realization& realization,
               const Protocol& protocol = Protocol::synchronous(),
               const RunOptions& options = RunOptions());

struct ProtocolInvarianceReport {
  std::vector<Vector> limits;
  double max_pairwise_gap = 0.0;
  bool pass = false;
};

/// Runs each protocol to convergence and compares the limits
/// (PASS iff the max pairwise gap is below 10 * tol).
ProtocolInvarianceReport protocol_invariance_check(const Network& net, const RuleProfile& rules,
                                                   const Realization& realization,
                                                   const std::vector<Protocol>& protocols,
                                                   const RunOptions& options = RunOptions());

}  // namespace opinionlab
