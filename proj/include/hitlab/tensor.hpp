// Dense multi-index tensors (contraction, reduced densities, entropies) and
// the exact pairing representation of Bell/epsilon product states, with
// conversion between the two.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hitlab/common.hpp"

namespace hitlab::tn {

struct Leg {
  int id = 0;
  int k = 1;        // qubit slots on this leg
  bool out = true;  // direction flag; contraction joins out against in
};

// Basis index convention: slot 0 of legs[0] is the least significant bit,
// slots within a leg contiguous, legs in listed order. Frozen; coefficient
// signs quoted in tests depend on it.
struct DenseTensor {
  std::vector<Leg> legs;
  std::vector<cd> data;

  int total_slots() const;
  long dim() const { return 1L << total_slots(); }
  int leg_pos(int leg_id) const;       // index into legs, -1 if absent
  int slot_offset(int leg_pos) const;  // first global slot of that leg
  DenseTensor flipped() const;         // same data, all directions toggled
  double norm() const;
  void normalize();
};

DenseTensor make_state(std::vector<Leg> legs, std::vector<cd> data);

// Contract the listed leg-id pairs (first from a, second from b) over all
// their slots. Empty list = outer product. Parallel kernel by default.
DenseTensor contract_pair(const DenseTensor& a, const DenseTensor& b,
                          const std::vector<std::pair<int, int>>& leg_pairs,
                          bool parallel = true);

// Serial reference implementation of the same operation (naive full sum,
// no precomputed offset tables); used as the oracle and in benchmarks.
DenseTensor contract_pair_serial(const DenseTensor& a, const DenseTensor& b,
                                 const std::vector<std::pair<int, int>>& leg_pairs);

// Contract a network: legs sharing an id across exactly two tensors are
// joined. Greedy order: repeatedly contract the pair of tensors whose result
// has the fewest slots.
DenseTensor contract_many(std::vector<DenseTensor> tensors, bool parallel = true);

// rho over the kept slots of a (normalized) state vector.
Mat reduced_density(const DenseTensor& state, const std::vector<int>& keep_slots);

// Nonzero spectrum of the reduced density over `region` slots, computed
// through a sparsity-aware Gram matrix (never materializes rho when the
// state is sparse). Eigenvalues are of the normalized state.
std::vector<double> reduced_eigenvalues(const std::vector<cd>& psi, int n_slots,
                                        const std::vector<int>& region);

// von Neumann entropy in bits; eigenvalues below TOL_EIG treated as zero.
double entropy_bits(const Mat& rho);
double entropy_bits(const std::vector<double>& eigenvalues);

// Hilbert-Schmidt inner product <a, b> = sum conj(a) b; requires identical
// leg signatures.
cd hs_inner(const DenseTensor& a, const DenseTensor& b);

// Conjugated copy with all leg directions toggled (the bra tensor).
DenseTensor conj_tensor(const DenseTensor& t);

// Reorder legs: result leg position j holds input leg position order[j].
DenseTensor permute_legs(const DenseTensor& t, const std::vector<int>& order);

// Permute the slots within one leg: result slot j carries input slot perm[j].
DenseTensor permute_leg_slots(const DenseTensor& t, int leg_id,
                              const std::vector<int>& perm);

// Reduced density over `keep` slots from a sparse amplitude list (normalized).
Mat reduced_density_sparse(const std::vector<std::pair<long, cd>>& amps, int n_slots,
                           const std::vector<int>& keep);

std::string tensor_to_json(const DenseTensor& t);
DenseTensor tensor_from_json(const std::string& text);

// --- pairing representation ---------------------------------------------

// One matched slot pair carrying a 2x2 bilinear form:
// the factor sum_{xy} form(x,y) |x>_a |y>_b. Plain epsilon pairs have
// form = i*eps; chain composition and holonomies produce general forms.
struct Pair {
  int a = 0;
  int b = 0;
  Mat2 form;
};

Mat2 eps_form();

struct PairingState {
  int slots = 0;
  std::vector<Pair> pairs;
  std::map<int, std::vector<int>> perms;  // per-edge slot permutations (round-trip metadata)
  cd scalar = cd(1, 0);

  bool is_perfect_matching() const;
  double norm() const;  // closed form: |scalar| * prod of HS norms of the pair forms
};

// Entropy in bits of the reduced state on `region_slots`: one bit per pair
// split by the region. Exact for forms proportional to a unitary (checked).
double pairing_entropy(const PairingState& st, const std::vector<int>& region_slots);

// Nonzero amplitudes as (basis index, value), scalar included.
std::vector<std::pair<long, cd>> pairing_amplitudes(const PairingState& st);

// Explicit state vector (single leg of k = slots); refuses above max_slots.
DenseTensor pairing_to_dense(const PairingState& st, int max_slots = 26);

std::string pairing_to_json(const PairingState& st);
PairingState pairing_from_json(const std::string& text);

}  // namespace hitlab::tn
