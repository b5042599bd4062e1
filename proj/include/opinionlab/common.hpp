#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace opinionlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error taxonomy. Every solver failure carries a message prefixed with the
// function that raised it.
struct NotStronglyConnected : std::runtime_error { using std::runtime_error::runtime_error; };
struct InvalidSize          : std::runtime_error { using std::runtime_error::runtime_error; };
struct MissingNetwork       : std::runtime_error { using std::runtime_error::runtime_error; };
struct ZeroSeedWeight       : std::runtime_error { using std::runtime_error::runtime_error; };
struct AllDeGroot           : std::runtime_error { using std::runtime_error::runtime_error; };
struct Singular             : std::runtime_error { using std::runtime_error::runtime_error; };
struct Degenerate           : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoConvergence        : std::runtime_error { using std::runtime_error::runtime_error; };
struct UnsupportedNetwork   : std::runtime_error { using std::runtime_error::runtime_error; };
struct GammaOutOfRange      : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoRoot               : std::runtime_error { using std::runtime_error::runtime_error; };
struct ConfigError          : std::runtime_error { using std::runtime_error::runtime_error; };

inline constexpr double kRowSumTol = 1e-12;

}  // namespace opinionlab
