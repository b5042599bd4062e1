#pragma once

#include <string>
#include <vector>

#include "opinionlab/common.hpp"

namespace opinionlab {

/// Weighted listening network. A is row-stochastic with zero diagonal:
/// A(i, j) is the weight player i puts on player j's reported opinion.
/// Self-weight is carried by the adjustment speed, never by A.
struct Network {
  int n = 0;
  Matrix A;
  std::vector<std::string> labels;  // optional, empty when unnamed

  const std::string& generator_name() const { return generator_; }
  std::string generator_;  // set by generators, "" for inline matrices
};

/// Validates row sums (within 1e-12), nonnegativity and zero diagonal.
/// Throws InvalidSize on violation.
Network make_network(Matrix A, std::vector<std::string> labels = {});

Network make_complete(int n);
Network make_directed_circle(int n);
Network make_star(int n);
/// Two disconnected stars of n_per_star players each (hub first in each block).
Network make_two_stars(int n_per_star);

/// Generator lookup by name: "complete", "directed_circle", "star", "two_stars"
/// (for two_stars, n is the per-star player count). Throws ConfigError on an
/// unknown name.
Network make_named_network(const std::string& name, int n);

struct Connectivity {
  bool strongly_connected = false;  // every player reaches every other
  bool aperiodic = false;           // gcd of cycle lengths is 1
  bool primitive() const { return strongly_connected && aperiodic; }
};

Connectivity connectivity(const Network& net);

/// Strict connectivity test: some power A^k is entrywise positive.
/// Pure cycles fail this (periodic support) even though they are strongly
/// connected; use connectivity() to read the two flags separately.
bool is_connected(const Network& net);

/// Unique stationary row vector: rho * A = rho, sum 1, entrywise positive.
/// Direct linear solve (exact for periodic chains). Throws NotStronglyConnected.
Vector stationary_weights(const Network& net);

}  // namespace opinionlab
