#include "qclsim/fields.hpp"

namespace qclsim {

namespace {

ComplexMatrix scalar(double v) { return ComplexMatrix::Constant(1, 1, Complex(v)); }

std::shared_ptr<const CanonicalModel> default_quartic() {
  static const auto model = std::make_shared<TwoLevelQuartic>(TwoLevelQuartic::Params{});
  return model;
}

OperatorField qp_sz_field() {
  return {2, 2,
          [](const Vector& x) -> ComplexMatrix { return x[0] * x[1] * pauli_z(); },
          [](const Vector& x) {
            return std::vector<ComplexMatrix>{x[1] * pauli_z(), x[0] * pauli_z()};
          }};
}

OperatorField q2p_field() {
  return {2, 1,
          [](const Vector& x) { return scalar(x[0] * x[0] * x[1]); },
          [](const Vector& x) {
            return std::vector<ComplexMatrix>{scalar(2.0 * x[0] * x[1]), scalar(x[0] * x[0])};
          }};
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"Q",  "P",  "Q2P", "Qsz", "Psx", "QPsz", "sx",     "sy",     "sz",
          "id", "H_quartic", "Sx", "Sy", "Sz", "H_spin", "H_nose", "H_nhc"};
}

std::vector<std::string> mixed_jacobi_triple() { return {"QPsz", "Qsz", "Psx"}; }

NamedField catalog_field(const std::string& name) {
  using K = StructureKind;
  if (name == "Q") return {name, K::canonical, OperatorField::linear(2, 0, scalar(1.0))};
  if (name == "P") return {name, K::canonical, OperatorField::linear(2, 1, scalar(1.0))};
  if (name == "Q2P") return {name, K::canonical, q2p_field()};
  if (name == "Qsz") return {name, K::canonical, OperatorField::linear(2, 0, pauli_z())};
  if (name == "Psx") return {name, K::canonical, OperatorField::linear(2, 1, pauli_x())};
  if (name == "QPsz") return {name, K::canonical, qp_sz_field()};
  if (name == "sx") return {name, K::canonical, OperatorField::constant(2, pauli_x())};
  if (name == "sy") return {name, K::canonical, OperatorField::constant(2, pauli_y())};
  if (name == "sz") return {name, K::canonical, OperatorField::constant(2, pauli_z())};
  if (name == "id") return {name, K::canonical, OperatorField::constant(2, identity2())};
  if (name == "H_quartic") return {name, K::canonical, hamiltonian_field(default_quartic())};
  if (name == "Sx") return {name, K::spin, OperatorField::linear(3, 0, scalar(1.0))};
  if (name == "Sy") return {name, K::spin, OperatorField::linear(3, 1, scalar(1.0))};
  if (name == "Sz") return {name, K::spin, OperatorField::linear(3, 2, scalar(1.0))};
  if (name == "H_spin") return {name, K::spin, hamiltonian_field(SpinBathModel{})};
  if (name == "H_nose") {
    return {name, K::nose, hamiltonian_field(NoseExtension{default_quartic()})};
  }
  if (name == "H_nhc") return {name, K::nhc, hamiltonian_field(NhcExtension{default_quartic()})};
  throw Error("unknown field '" + name + "'");
}

OperatorField lift(const OperatorField& field, int levels) {
  if (field.levels() == levels) return field;
  if (field.levels() != 1) throw DimensionError("lift: only scalar fields can be promoted");
  const ComplexMatrix eye = ComplexMatrix::Identity(levels, levels);
  return {field.dimension(), levels,
          [field, eye](const Vector& x) -> ComplexMatrix { return field(x)(0, 0) * eye; },
          [field, eye](const Vector& x) {
            auto g = field.gradient(x);
            std::vector<ComplexMatrix> out;
            out.reserve(g.size());
            for (const auto& gi : g) out.push_back(gi(0, 0) * eye);
            return out;
          }};
}

NamedField catalog_hamiltonian(StructureKind kind) {
  switch (kind) {
    case StructureKind::canonical: return catalog_field("H_quartic");
    case StructureKind::spin: return catalog_field("H_spin");
    case StructureKind::nose: return catalog_field("H_nose");
    case StructureKind::nhc: return catalog_field("H_nhc");
  }
  throw Error("catalog_hamiltonian: unknown structure");
}

StructureMatrix structure_for(StructureKind kind) {
  switch (kind) {
    case StructureKind::canonical: return StructureMatrix::canonical(1);
    case StructureKind::spin: return StructureMatrix::spin();
    case StructureKind::nose: return StructureMatrix::nose(1);
    case StructureKind::nhc: return StructureMatrix::nhc(1);
  }
  throw Error("structure_for: unknown structure");
}

std::vector<std::string> canonical_observable_names() {
  return {"identity", "sx", "sy", "sz", "Q", "P", "H"};
}

std::vector<std::string> spin_observable_names() {
  return {"identity", "sx", "sy", "sz", "Sx", "Sy", "Sz", "H"};
}

OperatorField canonical_observable(const std::string& name,
                                   std::shared_ptr<const CanonicalModel> model) {
  const int d = model->bath_dim();
  const int n = model->levels();
  const int dim = 2 * d;
  if (name == "identity") return OperatorField::constant(dim, ComplexMatrix::Identity(n, n));
  if (name == "H") return hamiltonian_field(model);
  if (name == "Q") return OperatorField::linear(dim, 0, ComplexMatrix::Identity(n, n));
  if (name == "P") return OperatorField::linear(dim, d, ComplexMatrix::Identity(n, n));
  if (name == "sx" || name == "sy" || name == "sz") {
    if (n != 2) throw ConfigError("observable '" + name + "' needs a two-level model");
    const ComplexMatrix m = name == "sx" ? pauli_x() : name == "sy" ? pauli_y() : pauli_z();
    return OperatorField::constant(dim, m);
  }
  throw ConfigError("unknown observable '" + name + "'");
}

OperatorField spin_observable(const std::string& name, const SpinBathModel& model) {
  if (name == "identity") return OperatorField::constant(3, identity2());
  if (name == "H") return hamiltonian_field(model);
  if (name == "sx") return OperatorField::constant(3, pauli_x());
  if (name == "sy") return OperatorField::constant(3, pauli_y());
  if (name == "sz") return OperatorField::constant(3, pauli_z());
  if (name == "Sx") return OperatorField::linear(3, 0, identity2());
  if (name == "Sy") return OperatorField::linear(3, 1, identity2());
  if (name == "Sz") return OperatorField::linear(3, 2, identity2());
  throw ConfigError("unknown observable '" + name + "'");
}

}  // namespace qclsim
