#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qclsim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using Vector3 = Eigen::Vector3d;

inline constexpr Complex kI{0.0, 1.0};

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A computation produced NaN/Inf or hit a singular configuration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Adiabatic index pair (alpha, alpha') labelling a matrix element W_{alpha alpha'}.
struct Pair {
  int first = 0;
  int second = 0;

  bool diagonal() const { return first == second; }
  friend bool operator==(const Pair&, const Pair&) = default;
};

// Pauli matrices and identity for two-level subsystems.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix identity2();

/// Largest element magnitude of a complex matrix.
double max_abs(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

}  // namespace qclsim
