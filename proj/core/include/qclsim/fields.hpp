#pragma once

// Named operator fields used by the bracket tool, the check suites and as run
// observables.

#include <string>
#include <vector>

#include "qclsim/bracket.hpp"
#include "qclsim/models.hpp"

namespace qclsim {

struct NamedField {
  std::string name;
  StructureKind kind;
  OperatorField field;
};

/// Catalog over one canonical degree of freedom X = (Q, P) unless noted:
///   Q, P, Q2P (= Q^2 P), Qsz, Psx, QPsz, sx, sy, sz, id, H_quartic (default quartic model);
///   over spin X = (Sx, Sy, Sz): Sx, Sy, Sz, H_spin;
///   H_nose over (Q, Q_eta, P, P_eta); H_nhc over (Q, Q_eta1, Q_eta2, P, P_eta1, P_eta2).
NamedField catalog_field(const std::string& name);
std::vector<std::string> catalog_names();

/// Mixed quantum-classical triple whose quasi-Lie Jacobi sum does not vanish:
/// (QPsz, Qsz, Psx); at (Q, P) = (1, 1), hbar = 1 the residual is exactly 1.
std::vector<std::string> mixed_jacobi_triple();

/// Scalar fields promoted to multiples of the identity.
OperatorField lift(const OperatorField& field, int levels);

/// Default catalog Hamiltonian for a structure kind.
NamedField catalog_hamiltonian(StructureKind kind);

StructureMatrix structure_for(StructureKind kind);

/// Observables of a canonical run over X = (Q_1..Q_D, P_1..P_D):
///   identity, sx, sy, sz, Q, P (first bath coordinate), H.
OperatorField canonical_observable(const std::string& name,
                                   std::shared_ptr<const CanonicalModel> model);
/// Observables of a spin run over (Sx, Sy, Sz): identity, sx, sy, sz, Sx, Sy, Sz, H.
OperatorField spin_observable(const std::string& name, const SpinBathModel& model);

std::vector<std::string> canonical_observable_names();
std::vector<std::string> spin_observable_names();

}  // namespace qclsim
