#include "opinionlab/rules.hpp"

#include <cmath>

namespace opinionlab {

namespace {

// Mean-zero unit-variance draw.
double unit_draw(std::mt19937_64& eng, NoiseFamily family) {
  if (family == NoiseFamily::kUniform) {
    // Uniform on [-sqrt(3), sqrt(3)] has unit variance.
    std::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
    return u(eng);
  }
  std::normal_distribution<double> g(0.0, 1.0);
  return g(eng);
}

Vector unit_draws(std::mt19937_64& eng, int n, NoiseFamily family) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = unit_draw(eng, family);
  return v;
}

}  // namespace

RuleProfile make_rules(Vector m, Vector gamma, double gamma_floor) {
  if (m.size() != gamma.size() || m.size() < 1)
    throw InvalidSize("make_rules(): m and gamma must have equal positive length");
  if (gamma_floor <= 0.0) throw InvalidSize("make_rules(): gamma_floor must be positive");
  for (int i = 0; i < m.size(); ++i) {
    if (m(i) < 0.0 || m(i) > 1.0)
      throw InvalidSize("make_rules(): m out of [0,1] at player " + std::to_string(i));
    if (gamma(i) < gamma_floor || gamma(i) > 1.0)
      throw InvalidSize("make_rules(): gamma out of [gamma_floor,1] at player " +
                        std::to_string(i));
  }
  return RuleProfile{std::move(m), std::move(gamma), gamma_floor};
}

RuleProfile symmetric_rules(int n, double m, double gamma, double gamma_floor) {
  return make_rules(Vector::Constant(n, m), Vector::Constant(n, gamma), gamma_floor);
}

void validate(const NoiseSpec& noise, int n) {
  if (noise.persistent_variance < 0.0 || noise.idiosyncratic_variance < 0.0)
    throw InvalidSize("NoiseSpec: variances must be nonnegative");
  if (noise.persistent_bias.size() != 0 && noise.persistent_bias.size() != n)
    throw InvalidSize("NoiseSpec: persistent_bias length mismatch");
  if (noise.correlation == Correlation::kCustom) {
    const Matrix& S = noise.custom_covariance;
    if (S.rows() != n || S.cols() != n)
      throw InvalidSize("NoiseSpec: custom covariance must be n x n");
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw InvalidSize("NoiseSpec: custom covariance must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw InvalidSize("NoiseSpec: custom covariance must be positive semidefinite");
  }
}

namespace {

Matrix base_covariance(const NoiseSpec& noise, int n) {
  switch (noise.correlation) {
    case Correlation::kIndependent:
      return noise.persistent_variance * Matrix::Identity(n, n);
    case Correlation::kPerfectlyCorrelated:
      return noise.persistent_variance * Matrix::Ones(n, n);
    case Correlation::kCustom:
      return noise.custom_covariance;
  }
  return Matrix();
}

}  // namespace

Matrix xi_covariance(const NoiseSpec& noise, int n, const Network* net) {
  validate(noise, n);
  Matrix S = base_covariance(noise, n);
  if (noise.locus == ErrorLocus::kExpressing) {
    if (net == nullptr)
      throw MissingNetwork("xi_covariance(): expressing locus needs the network");
    S = net->A * S * net->A.transpose();
  }
  return S;
}

Vector xi_mean(const NoiseSpec& noise, int n, const Network* net) {
  Vector b = noise.persistent_bias.size() == 0 ? Vector::Zero(n) : noise.persistent_bias;
  if (noise.locus == ErrorLocus::kExpressing) {
    if (net == nullptr) throw MissingNetwork("xi_mean(): expressing locus needs the network");
    b = net->A * b;
  }
  return b;
}

Vector NuStream::next() {
  Vector v = Vector::Zero(n_);
  if (sd_ > 0.0) {
    for (int i = 0; i < n_; ++i) v(i) = sd_ * unit_draw(engine_, family_);
  }
  return v;
}

Realization sample_realization(const SignalModel& signal, const NoiseSpec& noise, int n,
                               std::uint64_t seed, const Network* net) {
  if (n < 2) throw InvalidSize("sample_realization(): n >= 2 required");
  validate(noise, n);
  if (noise.locus == ErrorLocus::kExpressing && net == nullptr)
    throw MissingNetwork("sample_realization(): expressing locus needs the network");

  std::mt19937_64 eng(seed);
  Realization r;
  r.theta = std::sqrt(signal.theta_variance) * unit_draw(eng, noise.family);
  const Vector sig = signal.sigma_sq_or_ones(n);
  r.x = Vector::Constant(n, r.theta) + sig.cwiseSqrt().cwiseProduct(unit_draws(eng, n, noise.family));

  // Raw per-player persistent errors (processing, or expressing before folding).
  Vector raw;
  const Vector bias = noise.persistent_bias.size() == 0 ? Vector::Zero(n) : noise.persistent_bias;
  const double sd = std::sqrt(noise.persistent_variance);
  switch (noise.correlation) {
    case Correlation::kIndependent:
      raw = bias + sd * unit_draws(eng, n, noise.family);
      break;
    case Correlation::kPerfectlyCorrelated:
      raw = bias + Vector::Constant(n, sd * unit_draw(eng, noise.family));
      break;
    case Correlation::kCustom: {
      Eigen::SelfAdjointEigenSolver<Matrix> es(noise.custom_covariance);
      const Matrix root = es.eigenvectors() *
                          es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                          es.eigenvectors().transpose();
      raw = bias + root * unit_draws(eng, n, noise.family);
      break;
    }
  }
  r.xi = noise.locus == ErrorLocus::kExpressing ? Vector(net->A * raw) : raw;

  r.idiosyncratic_variance = noise.idiosyncratic_variance;
  r.family = noise.family;
  r.nu_seed = eng();  // derived sub-seed for the per-period stream
  return r;
}

double modified_seed(double x, double xi, double m) {
  if (m <= 0.0) throw ZeroSeedWeight("modified_seed(): m must be positive");
  return x + (1.0 - m) * xi / m;
}

}  // namespace opinionlab
