#include "opinionlab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace opinionlab {

Protocol random_covering_schedule(const Network& net, int coverage_k, std::uint64_t seed) {
  if (coverage_k < 1) throw InvalidSize("random_covering_schedule(): coverage_k >= 1");
  std::mt19937_64 eng(seed);
  Protocol p;
  p.kind = Protocol::Kind::kScheduled;
  p.coverage_k = coverage_k;
  p.schedule.assign(coverage_k, std::vector<std::vector<int>>(net.n));
  for (int i = 0; i < net.n; ++i) {
    std::vector<int> nbrs;
    for (int j = 0; j < net.n; ++j)
      if (net.A(i, j) > 0.0) nbrs.push_back(j);
    std::shuffle(nbrs.begin(), nbrs.end(), eng);
    // Deal neighbors round-robin over the K slots: each heard exactly once per cycle.
    for (std::size_t q = 0; q < nbrs.size(); ++q)
      p.schedule[q % coverage_k][i].push_back(nbrs[q]);
  }
  return p;
}

bool covers_neighbors(const Protocol& protocol, const Network& net) {
  if (protocol.kind == Protocol::Kind::kSynchronous) return true;
  const int P = protocol.period();
  if (P == 0) return false;
  const int K = protocol.coverage_k;
  for (int i = 0; i < net.n; ++i) {
    std::vector<int> nbrs;
    for (int j = 0; j < net.n; ++j)
      if (net.A(i, j) > 0.0) nbrs.push_back(j);
    for (int t = 0; t < P; ++t) {
      std::vector<char> heard(net.n, 0);
      for (int s = 0; s < K; ++s)
        for (int j : protocol.schedule[(t + s) % P][i]) heard[j] = 1;
      for (int j : nbrs)
        if (!heard[j]) return false;
    }
  }
  return true;
}

Vector synchronous_step(const Vector& y_prev, const Network& net, const RuleProfile& rules,
                        const Vector& x, const Vector& xi, const Vector& nu) {
  const Vector z = net.A * y_prev + xi + nu;
  Vector y(net.n);
  for (int i = 0; i < net.n; ++i) {
    const double mix = rules.m(i) * x(i) + (1.0 - rules.m(i)) * z(i);
    y(i) = (1.0 - rules.gamma(i)) * y_prev(i) + rules.gamma(i) * mix;
  }
  return y;
}

namespace {

// Scheduled update with per-edge perception state Z (Z(i,j) = i's view of j).
Vector scheduled_step(const Vector& y_prev, const Network& net, const RuleProfile& rules,
                      const Vector& x, const Vector& xi, const Vector& nu,
                      const std::vector<std::vector<int>>& heard, Matrix& Z) {
  Vector y = y_prev;
  for (int i = 0; i < net.n; ++i) {
    if (heard[i].empty()) continue;  // skips the whole update this period
    for (int j : heard[i]) Z(i, j) = y_prev(j) + xi(i);
    const double zi = net.A.row(i).dot(Z.row(i)) + nu(i);
    const double mix = rules.m(i) * x(i) + (1.0 - rules.m(i)) * zi;
    y(i) = (1.0 - rules.gamma(i)) * y_prev(i) + rules.gamma(i) * mix;
  }
  return y;
}

}  // namespace

Trajectory run(const Network& net, const RuleProfile& rules, const Realization& realization,
               const Protocol& protocol, const RunOptions& options) {
  const int n = net.n;
  if (rules.n() != n || realization.n() != n) throw InvalidSize("run(): size mismatch");

  Trajectory traj;
  Vector y = realization.x;  // y^0 = x
  if (options.record_path) traj.path.push_back(y);

  NuStream nu_stream = realization.make_nu_stream();
  const bool has_nu = nu_stream.active();
  const Vector zero_nu = Vector::Zero(n);

  Matrix Z;  // perceptions, scheduled only: initialized as if all heard at t=0
  const bool scheduled = protocol.kind == Protocol::Kind::kScheduled;
  if (scheduled) {
    if (!covers_neighbors(protocol, net))
      throw InvalidSize("run(): schedule does not cover all neighbors every K periods");
    Z = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (net.A(i, j) > 0.0) Z(i, j) = realization.x(j) + realization.xi(i);
  }

  // Convergence is judged over whole schedule cycles: a sparse scheduled
  // period can leave every opinion untouched, which must not read as a
  // converged step.
  const long cycle = scheduled ? protocol.period() : 1;
  int quiet_cycles = 0;
  double cycle_max = 0.0, prev_cycle_max = -1.0;
  long next_checkpoint = 64;
  double prev_rate = -1.0;
  int rate_stable = 0;
  Vector y_next(n), z(n);

  for (long t = 1; t <= options.max_steps; ++t) {
    if (scheduled) {
      const Vector nu = has_nu ? nu_stream.next() : zero_nu;
      y_next = scheduled_step(y, net, rules, realization.x, realization.xi, nu,
                              protocol.schedule[(t - 1) % cycle], Z);
    } else {
      // Allocation-free synchronous update (hot path for long horizons).
      z.noalias() = net.A * y;
      z += realization.xi;
      if (has_nu) z += nu_stream.next();
      for (int i = 0; i < n; ++i) {
        const double mix = rules.m(i) * realization.x(i) + (1.0 - rules.m(i)) * z(i);
        y_next(i) = (1.0 - rules.gamma(i)) * y(i) + rules.gamma(i) * mix;
      }
    }
    const double step_norm = (y_next - y).cwiseAbs().maxCoeff();
    y.swap(y_next);
    traj.steps = t;
    if (options.record_path) traj.path.push_back(y);

    if (y.cwiseAbs().maxCoeff() > options.blowup_threshold) {
      traj.status = RunStatus::kDiverged;
      traj.y = y;
      return traj;
    }

    cycle_max = std::max(cycle_max, step_norm);
    if (t % cycle == 0) {
      if (cycle_max < options.tol) {
        ++quiet_cycles;
        double projected = cycle_max;
        if (prev_cycle_max > 0.0 && cycle_max > 0.0) {
          const double rate = std::min(cycle_max / prev_cycle_max, 0.999999);
          projected = cycle_max * rate / (1.0 - rate);
        }
        if (quiet_cycles >= 3 && projected < 5.0 * options.tol) {
          traj.status = RunStatus::kConverged;
          traj.y = y;
          return traj;
        }
      } else {
        quiet_cycles = 0;
      }
      prev_cycle_max = cycle_max;
      cycle_max = 0.0;
    }

    // Unanchored dynamics with persistent errors drift linearly: |y|/t
    // stabilizes at a positive constant across doubling checkpoints. A
    // converging run sends it to zero instead (ratio about one half).
    if (options.detect_drift && !has_nu && t == next_checkpoint) {
      next_checkpoint *= 2;
      const double rate = y.cwiseAbs().maxCoeff() / static_cast<double>(t);
      if (prev_rate > 0.0 && rate > std::max(100.0 * options.tol, 1e-8) &&
          std::abs(rate / prev_rate - 1.0) < 0.05) {
        if (++rate_stable >= 2) {
          traj.status = RunStatus::kDiverged;
          traj.y = y;
          return traj;
        }
      } else {
        rate_stable = 0;
      }
      prev_rate = rate;
    }
  }
  traj.status = RunStatus::kMaxedOut;
  traj.y = y;
  return traj;
}

ProtocolInvarianceReport protocol_invariance_check(const Network& net, const RuleProfile& rules,
                                                   const Realization& realization,
                                                   const std::vector<Protocol>& protocols,
                                                   const RunOptions& options) {
  ProtocolInvarianceReport rep;
  for (const Protocol& p : protocols) {
    Trajectory t = run(net, rules, realization, p, options);
    if (t.status != RunStatus::kConverged)
      throw NoConvergence("protocol_invariance_check(): a protocol run did not converge");
    rep.limits.push_back(t.y);
  }
  for (std::size_t a = 0; a < rep.limits.size(); ++a)
    for (std::size_t b = a + 1; b < rep.limits.size(); ++b)
      rep.max_pairwise_gap = std::max(
          rep.max_pairwise_gap, (rep.limits[a] - rep.limits[b]).cwiseAbs().maxCoeff());
  rep.pass = rep.max_pairwise_gap < 10.0 * options.tol;
  return rep;
}

}  // namespace opinionlab
