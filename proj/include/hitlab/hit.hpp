// Vertex tensor families for hyperinvariant SU(2) networks: star, left_right,
// l_shift, tensor products, and custom dense tensors, plus verifiers for
// cyclic symmetry, symmetry-generator invariance, and the three isometry
// relations (single-leg, edge unitary, two-vertex A-B-A).
#pragma once

#include <string>
#include <vector>

#include "hitlab/su2.hpp"
#include "hitlab/tensor.hpp"

namespace hitlab::hit {

enum class Family { star, left_right, l_shift, tensor_product, custom };

// One internal singlet of the vertex tensor: (leg_a, slot_a) couples to
// (leg_b, slot_b) through i*eps, first endpoint = first form index.
struct VertexPair {
  int leg_a = 0, slot_a = 0;
  int leg_b = 0, slot_b = 0;
};

struct HitSpec {
  int q = 0;  // valence
  int k = 0;  // slots (qubits) per leg
  Family family = Family::custom;
  std::vector<VertexPair> pairs;  // empty for the custom family
  std::vector<int> B;             // per-edge slot permutation (bijection on k)
  std::vector<int> R;             // head-on slot reversal fixed by the pairing
  std::vector<int> shifts;        // l_shift parameter list
  std::vector<HitSpec> factors;   // tensor_product operands
  tn::DenseTensor custom_tensor;  // custom family payload

  // Slot map across an edge: a line leaving one vertex at slot s enters the
  // neighboring vertex at slot edge_perm()[s] = B[R[s]].
  std::vector<int> edge_perm() const;
};

// Opposite-leg pairing: leg i couples to leg i + q/2 slotwise. Requires q
// even, k >= 1. B defaults to the identity; any permutation keeps the
// isometry relations.
HitSpec make_star(int q, int k = 1, std::vector<int> B = {});

// Neighbor pairing with k = 2: slot 0 of leg i couples to slot 1 of leg i+1
// cyclically; B is the swap of the two slots.
HitSpec make_left_right(int q);

// General neighbor-shift pairing: each shift l < q/2 claims a slot pair
// (source, target) coupling leg i to leg i+l for all i; a shift l = q/2
// claims one self-paired slot. B swaps the slot pair of every shift-1
// subspace and fixes the rest. An empty shift list gives the trivial k = 0
// spec (the tensor product identity).
HitSpec make_l_shift(int q, const std::vector<int>& shifts);

// Slot-disjoint union of two specs of equal valence; pairings, B, and R act
// blockwise per leg (first factor slots 0..a.k-1, then the second factor).
HitSpec hit_tensor_product(const HitSpec& a, const HitSpec& b);

// Wrap an explicit dense vertex tensor (q legs of k slots, ids 0..q-1, all
// outgoing). B defaults to the identity.
HitSpec make_custom(int q, int k, tn::DenseTensor tensor, std::vector<int> B = {});

// The vertex state as an exact pairing; leg i slot s holds global slot
// i*k + s. Not available for the custom family.
tn::PairingState vertex_state(const HitSpec& spec);

// The vertex tensor densely, one leg per graph leg with k slots each.
tn::DenseTensor vertex_dense(const HitSpec& spec);

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
};

bool all_pass(const std::vector<CheckResult>& checks);

// A(rotated legs) == A: exact oriented-matching comparison for pairing
// families, dense rotation residual <= 1e-9 for custom tensors.
std::vector<CheckResult> verify_cyclic(const HitSpec& spec);

struct InvarianceResult {
  bool eigenvector = false;  // N psi = c psi within tolerance
  cd eigenvalue{0, 0};       // best-fit c
  double residual = 0;       // |N psi - c psi| / |psi|
};

// Check the state is an eigenvector of the one-body generator N.
InvarianceResult verify_invariance(const tn::DenseTensor& t, const su2::GeneratorSpec& gen);

// All three global spin components must annihilate the vertex state (c = 0).
std::vector<CheckResult> verify_su2_invariance(const HitSpec& spec);

// The three defining relations: (i) every single-leg marginal is 1/2^k,
// (ii) the edge permutation is unitary, (iii) the two-vertex A-B-A map is an
// isometry from the two distinguished outer legs (the legs hugging the shared
// edge) to the rest, computed densely at the two-vertex scale.
std::vector<CheckResult> verify_isometries(const HitSpec& spec);

std::string hitspec_to_json(const HitSpec& spec);
HitSpec hitspec_from_json(const std::string& text);

}  // namespace hitlab::hit
