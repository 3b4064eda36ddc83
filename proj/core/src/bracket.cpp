#include "qclsim/bracket.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace qclsim {

namespace {

double step_3pt(double xi) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(xi));
}

double step_5pt(double xi) {
  static const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.2);
  return base * std::max(1.0, std::abs(xi));
}

void check_dimensions(const OperatorField& a, const OperatorField& b,
                      const StructureMatrix& s, const Vector& x) {
  if (a.dimension() != s.dimension() || b.dimension() != s.dimension() ||
      x.size() != s.dimension()) {
    throw DimensionError("bracket: coordinate dimensions of fields, structure and point differ");
  }
  if (a.levels() != b.levels()) {
    throw DimensionError("bracket: fields act on subsystems of different size");
  }
}

void check_finite(const std::vector<ComplexMatrix>& grad, const char* what) {
  for (const auto& g : grad) {
    if (!all_finite(g)) {
      throw NumericalError(std::string("non-finite gradient of ") + what);
    }
  }
}

// Contraction sum_IJ ga[I] B_IJ gb[J] with operator order preserved.
ComplexMatrix contract(const std::vector<ComplexMatrix>& ga, const Matrix& b,
                       const std::vector<ComplexMatrix>& gb, int levels) {
  ComplexMatrix out = ComplexMatrix::Zero(levels, levels);
  const auto n = static_cast<Eigen::Index>(ga.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double bij = b(i, j);
      if (bij == 0.0) continue;
      out.noalias() += bij * (ga[i] * gb[j]);
    }
  }
  return out;
}

}  // namespace

std::string to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::canonical: return "canonical";
    case StructureKind::spin: return "spin";
    case StructureKind::nose: return "nose";
    case StructureKind::nhc: return "nhc";
  }
  return "unknown";
}

StructureMatrix::StructureMatrix(int dimension, StructureKind kind, Evaluator evaluate)
    : dimension_(dimension), kind_(kind), evaluate_(std::move(evaluate)) {}

Matrix StructureMatrix::operator()(const Vector& x) const {
  if (x.size() != dimension_) {
    throw DimensionError("structure matrix evaluated at a point of wrong dimension");
  }
  return evaluate_(x);
}

StructureMatrix StructureMatrix::canonical(int dof) {
  Matrix b = Matrix::Zero(2 * dof, 2 * dof);
  b.topRightCorner(dof, dof) = Matrix::Identity(dof, dof);
  b.bottomLeftCorner(dof, dof) = -Matrix::Identity(dof, dof);
  return {2 * dof, StructureKind::canonical, [b](const Vector&) { return b; }};
}

StructureMatrix StructureMatrix::spin() {
  return {3, StructureKind::spin, [](const Vector& s) {
            Matrix b(3, 3);
            b << 0.0, s[2], -s[1],
                -s[2], 0.0, s[0],
                s[1], -s[0], 0.0;
            return b;
          }};
}

StructureMatrix StructureMatrix::nose(int dof) {
  const int half = dof + 1;
  return {2 * half, StructureKind::nose, [dof, half](const Vector& x) {
            Matrix b = Matrix::Zero(2 * half, 2 * half);
            b.topRightCorner(half, half) = Matrix::Identity(half, half);
            b.bottomLeftCorner(half, half) = -Matrix::Identity(half, half);
            const int p_eta = half + dof;
            for (int i = 0; i < dof; ++i) {
              const int p = half + i;
              b(p, p_eta) = -x[p];
              b(p_eta, p) = x[p];
            }
            return b;
          }};
}

StructureMatrix StructureMatrix::nhc(int dof) {
  const int half = dof + 2;
  return {2 * half, StructureKind::nhc, [dof, half](const Vector& x) {
            Matrix b = Matrix::Zero(2 * half, 2 * half);
            b.topRightCorner(half, half) = Matrix::Identity(half, half);
            b.bottomLeftCorner(half, half) = -Matrix::Identity(half, half);
            const int p_eta1 = half + dof;
            const int p_eta2 = p_eta1 + 1;
            for (int i = 0; i < dof; ++i) {
              const int p = half + i;
              b(p, p_eta1) = -x[p];
              b(p_eta1, p) = x[p];
            }
            b(p_eta1, p_eta2) = -x[p_eta1];
            b(p_eta2, p_eta1) = x[p_eta1];
            return b;
          }};
}

OperatorField::OperatorField(int dimension, int levels, Evaluator evaluate, Gradient gradient,
                             Domain domain)
    : dimension_(dimension),
      levels_(levels),
      evaluate_(std::move(evaluate)),
      gradient_(std::move(gradient)),
      domain_(std::move(domain)) {}

OperatorField OperatorField::constant(int dimension, ComplexMatrix value) {
  const auto n = static_cast<int>(value.rows());
  return {dimension, n, [value](const Vector&) { return value; },
          [dimension, n](const Vector&) {
            return std::vector<ComplexMatrix>(dimension, ComplexMatrix::Zero(n, n));
          }};
}

OperatorField OperatorField::linear(int dimension, int index, ComplexMatrix matrix) {
  const auto n = static_cast<int>(matrix.rows());
  return {dimension, n, [index, matrix](const Vector& x) -> ComplexMatrix { return x[index] * matrix; },
          [dimension, index, n, matrix](const Vector&) {
            std::vector<ComplexMatrix> g(dimension, ComplexMatrix::Zero(n, n));
            g[index] = matrix;
            return g;
          }};
}

ComplexMatrix OperatorField::operator()(const Vector& x) const {
  if (x.size() != dimension_) {
    throw DimensionError("operator field evaluated at a point of wrong dimension");
  }
  return evaluate_(x);
}

std::vector<ComplexMatrix> OperatorField::gradient(const Vector& x) const {
  if (x.size() != dimension_) {
    throw DimensionError("operator field gradient at a point of wrong dimension");
  }
  if (gradient_) return gradient_(x);
  return finite_difference_gradient(*this, x, 3);
}

std::vector<ComplexMatrix> finite_difference_gradient(const OperatorField& field,
                                                      const Vector& x, int points) {
  if (points != 3 && points != 5) {
    throw Error("finite_difference_gradient: stencil must have 3 or 5 points");
  }
  std::vector<ComplexMatrix> grad(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = points == 3 ? step_3pt(x[i]) : step_5pt(x[i]);
    auto at = [&](double offset) {
      probe[i] = x[i] + offset;
      if (!field.in_domain(probe)) {
        throw DomainError("finite-difference stencil leaves the field domain");
      }
      ComplexMatrix v = field(probe);
      probe[i] = x[i];
      return v;
    };
    if (points == 3) {
      grad[i] = (at(h) - at(-h)) / (2.0 * h);
    } else {
      grad[i] = (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
    }
  }
  return grad;
}

BracketResult poisson_bracket(const OperatorField& a, const OperatorField& b,
                              const StructureMatrix& structure, const Vector& x) {
  check_dimensions(a, b, structure, x);
  const auto ga = a.gradient(x);
  const auto gb = b.gradient(x);
  check_finite(ga, "left operand");
  check_finite(gb, "right operand");
  return {contract(ga, structure(x), gb, a.levels()), x};
}

BracketResult quasi_lie_bracket(const OperatorField& a, const OperatorField& b,
                                const StructureMatrix& structure, const Vector& x,
                                double hbar) {
  if (!(hbar > 0.0)) throw Error("quasi_lie_bracket: hbar must be positive");
  check_dimensions(a, b, structure, x);
  const ComplexMatrix va = a(x);
  const ComplexMatrix vb = b(x);
  const auto ga = a.gradient(x);
  const auto gb = b.gradient(x);
  check_finite(ga, "left operand");
  check_finite(gb, "right operand");
  const Matrix bm = structure(x);
  const ComplexMatrix ab = contract(ga, bm, gb, a.levels());
  const ComplexMatrix ba = contract(gb, bm, ga, a.levels());
  ComplexMatrix value = (kI / hbar) * (va * vb - vb * va) - 0.5 * ab + 0.5 * ba;
  if (!all_finite(value)) throw NumericalError("quasi_lie_bracket: non-finite result");
  return {std::move(value), x};
}

OperatorField quasi_lie_bracket_field(const OperatorField& a, const OperatorField& b,
                                      const StructureMatrix& structure, double hbar) {
  auto eval = [a, b, structure, hbar](const Vector& x) {
    return quasi_lie_bracket(a, b, structure, x, hbar).value;
  };
  auto domain = [a, b](const Vector& x) { return a.in_domain(x) && b.in_domain(x); };
  const OperatorField plain(a.dimension(), a.levels(), eval, nullptr, domain);
  auto grad = [plain](const Vector& x) { return finite_difference_gradient(plain, x, 5); };
  return {a.dimension(), a.levels(), eval, grad, domain};
}

double jacobi_residual(const OperatorField& a1, const OperatorField& a2,
                       const OperatorField& a3, const StructureMatrix& structure,
                       const Vector& x, double hbar) {
  const auto inner23 = quasi_lie_bracket_field(a2, a3, structure, hbar);
  const auto inner12 = quasi_lie_bracket_field(a1, a2, structure, hbar);
  const auto inner31 = quasi_lie_bracket_field(a3, a1, structure, hbar);
  const ComplexMatrix cyclic = quasi_lie_bracket(a1, inner23, structure, x, hbar).value +
                               quasi_lie_bracket(a3, inner12, structure, x, hbar).value +
                               quasi_lie_bracket(a2, inner31, structure, x, hbar).value;
  return max_abs(cyclic);
}

double antisymmetry_defect(const StructureMatrix& structure, const Vector& x) {
  const Matrix b = structure(x);
  return (b + b.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace qclsim
