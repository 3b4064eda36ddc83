#pragma once

// Classical, quantum and quasi-Lie brackets of operator-valued phase-space
// functions, evaluated pointwise over an arbitrary antisymmetric structure
// matrix.

#include <functional>
#include <string>
#include <vector>

#include "qclsim/types.hpp"

namespace qclsim {

/// A finite-difference stencil left the domain of a field.
class DomainError : public Error {
 public:
  using Error::Error;
};

enum class StructureKind { canonical, spin, nose, nhc };

std::string to_string(StructureKind kind);

/// Antisymmetric (possibly coordinate dependent) matrix defining a classical
/// bracket  A <-grad B grad-> C = sum_IJ dA/dX_I B_IJ(X) dC/dX_J.
class StructureMatrix {
 public:
  using Evaluator = std::function<Matrix(const Vector&)>;

  StructureMatrix(int dimension, StructureKind kind, Evaluator evaluate);

  /// Constant symplectic block [[0, 1], [-1, 0]] over X = (Q_1..Q_n, P_1..P_n).
  static StructureMatrix canonical(int degrees_of_freedom);
  /// B_ab = sum_c eps_abc S_c over X = (S_x, S_y, S_z).
  static StructureMatrix spin();
  /// Nose bracket over X = (Q_1..Q_n, Q_eta, P_1..P_n, P_eta).
  static StructureMatrix nose(int degrees_of_freedom);
  /// Two-link Nose-Hoover chain over
  /// X = (Q_1..Q_n, Q_eta1, Q_eta2, P_1..P_n, P_eta1, P_eta2).
  static StructureMatrix nhc(int degrees_of_freedom);

  int dimension() const { return dimension_; }
  StructureKind kind() const { return kind_; }
  Matrix operator()(const Vector& x) const;

 private:
  int dimension_;
  StructureKind kind_;
  Evaluator evaluate_;
};

/// Hermitian-matrix-valued function of the classical coordinates.
class OperatorField {
 public:
  using Evaluator = std::function<ComplexMatrix(const Vector&)>;
  using Gradient = std::function<std::vector<ComplexMatrix>(const Vector&)>;
  using Domain = std::function<bool(const Vector&)>;

  OperatorField(int dimension, int levels, Evaluator evaluate,
                Gradient gradient = nullptr, Domain domain = nullptr);

  /// Coordinate-independent matrix.
  static OperatorField constant(int dimension, ComplexMatrix value);
  /// value(x) = x[index] * matrix.
  static OperatorField linear(int dimension, int index, ComplexMatrix matrix);

  int dimension() const { return dimension_; }
  int levels() const { return levels_; }
  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }
  bool in_domain(const Vector& x) const { return !domain_ || domain_(x); }

  ComplexMatrix operator()(const Vector& x) const;

  /// Analytic gradient when available, otherwise second-order central
  /// differences with step cbrt(eps) * max(1, |x_I|).
  std::vector<ComplexMatrix> gradient(const Vector& x) const;

 private:
  int dimension_;
  int levels_;
  Evaluator evaluate_;
  Gradient gradient_;
  Domain domain_;
};

/// Central-difference gradient with a 3- or 5-point stencil.
std::vector<ComplexMatrix> finite_difference_gradient(const OperatorField& field,
                                                      const Vector& x, int points);

struct BracketResult {
  ComplexMatrix value;
  Vector point;
};

/// sum_IJ (d_I a) B_IJ (d_J b), keeping operator order.
BracketResult poisson_bracket(const OperatorField& a, const OperatorField& b,
                              const StructureMatrix& structure, const Vector& x);

/// (i/hbar)[a,b] - 1/2 (a <-grad B grad-> b) + 1/2 (b <-grad B grad-> a).
///
/// With this sign dW/dt = -quasi_lie_bracket(H, W) is the quantum-classical
/// Liouville equation, and for 1x1 fields quasi_lie_bracket(a, b) = -{a, b}.
BracketResult quasi_lie_bracket(const OperatorField& a, const OperatorField& b,
                                const StructureMatrix& structure, const Vector& x,
                                double hbar);

/// The bracket [a, b] as a new field (no analytic gradient).
OperatorField quasi_lie_bracket_field(const OperatorField& a, const OperatorField& b,
                                      const StructureMatrix& structure, double hbar);

/// Max-element magnitude of the cyclic sum
///   [a1,[a2,a3]] + [a3,[a1,a2]] + [a2,[a3,a1]].
/// Gradients of the inner brackets use a 5-point stencil.
double jacobi_residual(const OperatorField& a1, const OperatorField& a2,
                       const OperatorField& a3, const StructureMatrix& structure,
                       const Vector& x, double hbar);

/// Largest element of |B + B^T| at x.
double antisymmetry_defect(const StructureMatrix& structure, const Vector& x);

/// Residual tolerance for "zero" Jacobi cyclic sums, dominated by the
/// nested finite-difference error.
inline constexpr double kJacobiTolerance = 1e-6;

}  // namespace qclsim
