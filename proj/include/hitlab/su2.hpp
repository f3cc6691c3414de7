// SU(2) representation machinery on k-qubit legs: epsilon/binor tensors,
// symmetrizers, recursive total-spin projectors, angular-momentum generators,
// irrep multiplicity counting.
#pragma once

#include <array>
#include <map>
#include <random>
#include <vector>

#include "hitlab/common.hpp"

namespace hitlab::su2 {

// The antisymmetric pair tensor i*eps: entries (0,1) -> i, (1,0) -> -i.
// With this convention every closed loop of alternating-orientation arcs
// evaluates to -2.
Mat2 epsilon();

// i*eps flattened to the 2-qubit state vector (0, i, -i, 0), slot 0 = low bit.
Vec epsilon_state();

// Projector onto the fully symmetric subspace of (C^2)^(x n); trace = n+1.
Mat symmetrizer(int n);

// Embed an operator acting on the given slots into the full 2^k space.
// slots[i] gives the global slot carrying the i-th tensor factor of op
// (slot s = bit s of the basis index).
Mat embed(const Mat& op, const std::vector<int>& slots, int k);

struct ProjectorEntry {
  int twice_j = 0;
  int multiplicity = 0;
  Mat P;  // projector onto the full spin-j isotypic subspace
};

struct SpinProjectorSet {
  int k = 0;
  std::vector<ProjectorEntry> entries;  // ascending twice_j
  const Mat& proj(int twice_j) const;
  bool has(int twice_j) const;
};

// Recursive construction: couple one qubit at a time; each branch keeps an
// isometry from the spin-j irrep into (C^2)^(x k), orthonormalized so branch
// projectors are idempotent. P^j sums the branch projectors of equal j.
SpinProjectorSet spin_projectors(int k);

// Catalan-triangle recursion for the multiplicity of spin j in (1/2)^(x k).
std::map<int, int> irrep_multiplicities(int k);

struct GeneratorTriple {
  int k = 0;
  Mat Jx, Jy, Jz;
};

// Total angular momentum J^i = sum over slots of single-slot Pauli/2.
GeneratorTriple total_spin_generators(int k);

// J^2 assembled directly from the generator triple.
Mat casimir(int k);

// Hilbert-Schmidt normalization prefactors 1/||D||^2 of the drawn branch
// diagram operators at k = 2 (cup-cap, S_2) and k = 3 (cup-cap (x) 1,
// symmetrized arc, S_3). Expected: {1/4, 1/3} and {1/8, 1/6, 1/4}.
std::vector<double> diagram_prefactors(int k);

// Orthonormal basis (columns) of the SU(2)-invariant (J = 0) subspace.
Mat invariant_basis(int k);

// Spin matrices (Jx, Jy, Jz) on the (2j+1)-dimensional irrep.
std::array<Mat, 3> spin_matrices(int twice_j);

// Haar-ish random SU(2) element from a normalized Gaussian quaternion.
Mat2 random_su2(std::mt19937_64& rng);

// One-body symmetry generator N = sum_i (alpha_i 1 + sum_a beta[i][a] T_a)
// acting on party i. The basis matrices T_a are shared traceless hermitian
// operators on the local space; beta holds one real coefficient row per party.
struct GeneratorSpec {
  std::vector<double> alpha;
  std::vector<std::vector<double>> beta;
  std::vector<Mat> basis;
  int parties() const { return int(alpha.size()); }
  long local_dim() const { return basis.empty() ? 1 : basis[0].rows(); }
  Mat site_op(int i) const;
};

// Total J_axis (axis 0,1,2) across `parties` legs of k qubits each.
GeneratorSpec spin_component_generator(int parties, int k, int axis);

// Weighted occupation-number generator sum_i alpha_i n_i on qubit parties,
// with n = (1 - sigma_z) / 2 counting |1>.
GeneratorSpec number_generator(const std::vector<double>& alpha);

}  // namespace hitlab::su2
