// Numerical certification of the symmetry no-go results: sector-weight
// decompositions, U(1)/SU(2) invariance versus 2-uniformity, the logical-leg
// code exclusion, the balanced-bipartition bound, and the geometric measure
// of distributed singlets.
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "hitlab/common.hpp"
#include "hitlab/tensor.hpp"

namespace hitlab::nogo {

// Generalized Gell-Mann basis of traceless Hermitian d x d matrices,
// Hilbert-Schmidt orthogonal with tr(T_a T_b) = 2 delta_ab. Order: symmetric
// pair matrices (j < k), antisymmetric pair matrices, then diagonals. For
// d = 2 this is exactly (sigma_x, sigma_y, sigma_z).
std::vector<Mat> traceless_basis(int d);

// One party of a U(1) generator N = sum_i (alpha_i 1 + sum_a beta_{i,a} T_a),
// with T_a the traceless basis of the party's dimension.
struct GeneratorParty {
  int dim = 2;
  double alpha = 0.0;
  std::map<int, double> betas;  // basis index a -> beta_{i,a}
};

struct GeneratorSpec {
  std::vector<GeneratorParty> parties;
  std::vector<int> dims() const;
  // The adjoint action is nontrivial iff some beta is nonzero.
  bool nontrivial() const;
  // N applied to a state vector over the party dimensions (site 0 varies
  // fastest in the index).
  std::vector<cd> apply(const std::vector<cd>& state) const;
};

// Total Jz = sum_i sigma_z^{(i)} / 2 on n qubits.
GeneratorSpec total_jz(int n_qubits);

// Expansion of rho over products of local traceless basis matrices and
// identities, binned by support size. Weights are purity contributions:
// weight[j] = sum over strings with support on exactly j parties of
// |c|^2 ||B||^2, so identity_weight + sum_j weights[j] = tr(rho^2) exactly.
struct SectorDecomposition {
  std::map<int, double> weights;
  double identity_weight = 0.0;
  std::map<int, double> single_site;             // party -> its weight-1 share
  std::map<std::pair<int, int>, double> two_site;  // (k < l) -> weight-2 share
};

SectorDecomposition sector_weights(const Mat& rho, const std::vector<int>& dims);

struct InvarianceResult {
  bool invariant = false;
  double c = 0.0;         // estimated eigenvalue <psi|N|psi>/<psi|psi>
  double residual = 0.0;  // ||N psi - c psi|| / ||psi||
};

// Whether N|psi> = c|psi> within 1e-9.
InvarianceResult check_u1_invariance(const std::vector<cd>& state,
                                     const GeneratorSpec& gen);

// Two-uniformity deviation D(psi) = sum_{k<l} ||rho_kl - 1/(d_k d_l)||_HS^2.
double two_uniform_deviation(const std::vector<cd>& state,
                             const std::vector<int>& dims);

// max over l != k of ||rho_{kl} - 1/d_k (x) rho_l||_HS at the designated
// party k; strictly positive on every U(1)-invariant state with a nontrivial
// generator at k.
double lemma_marginal_witness(const std::vector<cd>& state,
                              const std::vector<int>& dims, int k);

enum class Symmetry { none, u1, su2 };

struct TwoUniformOptions {
  int starts = 64;         // multistart count for subspace dimension >= 3
  int grid = 96;           // grid resolution per angle for dimension <= 2
  std::uint64_t seed = 1;  // base seed; start s uses seed + s
  GeneratorSpec gen;       // required for Symmetry::u1
};

struct TwoUniformResult {
  double min_deviation = 0.0;  // best D(psi) found over the symmetric subspace
  double witness = 0.0;        // best lemma_marginal_witness at party 0
  std::vector<cd> argmin;      // state achieving min_deviation
};

// Minimizes the two-uniformity deviation over the symmetric subspace:
// SU(2)-invariant qubit states, eigenspaces of a U(1) generator, or the full
// space for Symmetry::none. Two-dimensional subspaces are scanned on an
// exhaustive projective grid with local refinement; larger ones use seeded
// multistart simplex descent reduced by (value, start index).
TwoUniformResult min_two_uniform_deviation(int n, const std::vector<int>& dims,
                                           Symmetry sym,
                                           const TwoUniformOptions& opts = {});

struct CodeLegReport {
  bool marginals_uniform = false;  // rho_{logical,j} maximally mixed for all j
  double worst_marginal = 0.0;     // largest HS distance to 1/dim over j
  bool su2_invariant = false;      // all total generators annihilate the state
  double invariance_residual = 0.0;
  bool both() const { return marginals_uniform && su2_invariant; }
};

// Checks the two requirements on a code tensor with a designated logical
// leg: every (logical, physical) pair marginal maximally mixed, and global
// SU(2) invariance. No tensor satisfies both.
CodeLegReport check_evenbly_code(const tn::DenseTensor& tensor, int logical_leg);

// Number of balanced bipartitions (n parties per part, complements counted
// once) whose reduced state is maximally mixed within 1e-9.
int count_mm_balanced_bipartitions(const std::vector<cd>& state,
                                   const std::vector<int>& dims);

// Geometric measure of a collection of distributed singlet pairs of local
// dimension d: E_G = 1 - d^{-m} for m pairs. The pairing supplies the
// matching; closed loops or unpaired slots are rejected.
double geometric_measure_pairing(const tn::PairingState& state, int d);

// Oracle for the closed form: 1 minus the maximal squared overlap with
// product states, by seeded multistart alternating maximization.
double geometric_measure_dense(const std::vector<cd>& state,
                               const std::vector<int>& dims, int starts = 8,
                               std::uint64_t seed = 1);

// The d-dimensional singlet sum_i (-1)^i |i>|d-1-i> / sqrt(d).
std::vector<cd> qudit_singlet(int d);

// Cycle graph state on n qubits: |+>^n with controlled-Z on every cycle
// edge. For n = 5 every two-qubit marginal is maximally mixed.
std::vector<cd> cycle_graph_state(int n);

// Haar-like random state in the SU(2)-invariant subspace of n qubits
// (Gaussian coefficients over an orthonormal invariant basis).
std::vector<cd> random_invariant_state(int n_qubits, std::mt19937_64& rng);

}  // namespace hitlab::nogo
