#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "opinionlab/net.hpp"

namespace opinionlab {

/// Per-player update rule: permanent seed weight m in [0,1] and adjustment
/// speed gamma in [gamma_floor, 1].
struct RuleProfile {
  Vector m;
  Vector gamma;
  double gamma_floor = 1e-3;

  int n() const { return static_cast<int>(m.size()); }
};

RuleProfile make_rules(Vector m, Vector gamma, double gamma_floor = 1e-3);
RuleProfile symmetric_rules(int n, double m, double gamma, double gamma_floor = 1e-3);

/// State/seed model: x_i = theta + delta_i with var(delta_i) = sigma_sq(i).
struct SignalModel {
  double theta_variance = 1.0;
  Vector sigma_sq;  // empty means all ones at sampling time

  Vector sigma_sq_or_ones(int n) const {
    return sigma_sq.size() == 0 ? Vector::Ones(n) : sigma_sq;
  }
};

enum class Correlation { kIndependent, kPerfectlyCorrelated, kCustom };
enum class ErrorLocus { kProcessing, kExpressing };
enum class NoiseFamily { kGaussian, kUniform };

/// Transmission-error specification. Persistent errors xi are drawn once per
/// realization; idiosyncratic errors nu are drawn every period. With
/// locus = kExpressing the drawn per-player expressing errors zeta are folded
/// through the listening matrix: the effective processing error is A * zeta.
struct NoiseSpec {
  double persistent_variance = 0.0;  // varpi
  Vector persistent_bias;            // xi0, empty means zero
  Correlation correlation = Correlation::kIndependent;
  Matrix custom_covariance;          // used when correlation == kCustom
  double idiosyncratic_variance = 0.0;  // varpi0
  ErrorLocus locus = ErrorLocus::kProcessing;
  NoiseFamily family = NoiseFamily::kGaussian;
};

void validate(const NoiseSpec& noise, int n);

/// Covariance of the effective processing error vector xi.
/// Throws MissingNetwork when locus = kExpressing and net is null.
Matrix xi_covariance(const NoiseSpec& noise, int n, const Network* net = nullptr);

/// Mean of the effective processing error (bias folded through A if expressing).
Vector xi_mean(const NoiseSpec& noise, int n, const Network* net = nullptr);

/// Seeded stream of per-period idiosyncratic error vectors. Owned by a single
/// consumer; clone_with_seed() gives independent streams for parallel runs.
class NuStream {
 public:
  NuStream(int n, double variance, std::uint64_t seed, NoiseFamily family = NoiseFamily::kGaussian)
      : n_(n), sd_(std::sqrt(variance)), engine_(seed), family_(family) {}

  Vector next();
  bool active() const { return sd_ > 0.0; }
  NuStream clone_with_seed(std::uint64_t seed) const {
    return NuStream(n_, sd_ * sd_, seed, family_);
  }

 private:
  int n_;
  double sd_;
  std::mt19937_64 engine_;
  NoiseFamily family_;
};

/// One sampled problem: state, seeds, persistent errors, and the seed of the
/// idiosyncratic stream.
struct Realization {
  double theta = 0.0;
  Vector x;
  Vector xi;
  double idiosyncratic_variance = 0.0;
  NoiseFamily family = NoiseFamily::kGaussian;
  std::uint64_t nu_seed = 0;

  int n() const { return static_cast<int>(x.size()); }
  NuStream make_nu_stream() const {
    return NuStream(n(), idiosyncratic_variance, nu_seed, family);
  }
};

/// Draws theta, seeds and persistent errors; deterministic for a fixed seed.
Realization sample_realization(const SignalModel& signal, const NoiseSpec& noise, int n,
                               std::uint64_t seed, const Network* net = nullptr);

/// Modified seed: the effective seed after folding the persistent error into
/// the permanent anchor, x + (1-m) xi / m. Throws ZeroSeedWeight at m = 0.
double modified_seed(double x, double xi, double m);

}  // namespace opinionlab
