// Boundary states of vertex-tensor networks on tiling patches: assembly by
// walking Bell-pair chains through edge slot permutations (with optional
// per-edge SU(2) decorations), boundary entanglement entropies, entropy vs
// cut-length fits, transport-dressed two-point correlators, and the Bell-pair
// budget implied by a prescribed correlation decay.
#pragma once

#include <map>
#include <vector>

#include "hitlab/common.hpp"
#include "hitlab/hit.hpp"
#include "hitlab/tensor.hpp"
#include "hitlab/tiling.hpp"

namespace hitlab::net {

// Immutable result of assembling one vertex tensor per tiling vertex and
// welding legs through the edges. Boundary slots are numbered b*k + s for
// boundary leg position b (order of graph.boundary_legs) and slot s.
//
// pairing holds the surviving boundary pairs with their fully composed 2x2
// forms, and the scalar collects one trace factor per closed chain (-2 for a
// plain alternating loop). skeleton_forms are the same pair forms with the
// edge decorations stripped; they carry the network's pair connectivity in a
// decoration-independent frame. chain_edges / loop_edges record the interior
// edge ids each open chain / closed chain crosses, in walk order.
struct NetworkState {
  tiling::TilingGraph graph;
  hit::HitSpec spec;
  tn::PairingState pairing;
  std::vector<Mat2> skeleton_forms;
  std::map<int, Mat2> holonomies;
  std::vector<std::vector<int>> chain_edges;
  std::vector<std::vector<int>> loop_edges;
  std::vector<cd> loop_values;
};

// Weld every interior edge of the graph: the edge joining vertex u (slot su)
// to vertex v (slot sv) matches v-side slot j against u-side slot pi(j),
// pi = spec.edge_perm(). A holonomy entry (edge id -> 2x2 unitary) inserts
// that matrix on each of the k slot lines, read from the u side into the v
// side. Open chains become boundary pairs; closed chains multiply the scalar
// by their trace, and a vanishing trace (the state itself would be zero) is
// rejected. Requires a pair-family spec (custom tensors have no pair
// decomposition) whose valence matches the graph.
NetworkState assemble(const tiling::TilingGraph& graph, const hit::HitSpec& spec,
                      const std::map<int, Mat2>& holonomies = {});

// von Neumann entropy in bits of the region's boundary legs: one bit per
// pair split by the region (exact; all composed forms are unitary).
double boundary_entropy(const NetworkState& state, const tiling::BoundaryRegion& region);

// Least-squares line through (graph_length(minimal_cut), entropy) samples.
struct RtFit {
  double slope = 0.0;      // bits per crossed edge
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Needs at least two regions and at least two distinct cut lengths.
RtFit rt_fit(const NetworkState& state, const std::vector<tiling::BoundaryRegion>& regions);

// Normalized expectation <psi|O|psi> / <psi|psi> of a 2^k observable on one
// boundary leg (site = position in graph.boundary_legs).
cd one_point_expectation(const NetworkState& state, const Mat& obs, int site);

// Normalized two-point function of 2^k observables on two distinct boundary
// legs. Slots not touched by the observables trace out; a pair shared
// between the two legs routes obs1 against obs2 transposed through the
// conjugated pair form. Observables at the two sites are compared after
// parallel transport along the connecting pairs, so edge decorations cancel
// and the value probes the pair skeleton; at trivial decoration it equals
// the dense <psi|O1 O2|psi> / <psi|psi>.
cd two_point_correlator(const NetworkState& state, const Mat& obs1, int site1,
                        const Mat& obs2, int site2);

// An observable acting jointly on an explicit list of boundary slots (slot
// s = site*k + line); op has dimension 2^slots.size() with local bit t
// addressing slots[t].
struct SlotObservable {
  Mat op;
  std::vector<int> slots;
};

// Normalized expectation <psi| prod obs |psi> / <psi|psi> over the decorated
// pair forms (holonomies included), for insertions that couple several legs
// at once. Slot lists must be disjoint and their total at most 12.
cd pairing_expectation(const NetworkState& state, const std::vector<SlotObservable>& obs);

// Bell-pair budget for a correlation profile m*exp(-j/xi) between boundary
// parties at separation j (n parties total, m shared pairs between nearest
// neighbours).
struct CorrelationBudget {
  double k = 0.0;            // pairs per party: 2m(1-e^{-n/(2xi)})/(e^{1/xi}-1)
  double k_saturating = 0.0; // the same sum at the largest admissible m = e^{n/(2xi)}
  long max_usable_j = 0;     // largest separation with m e^{-j/xi} >= 1: floor(xi ln m)
  double q_lower_bound = 0.0;  // the valence must reach k to host the pairs
};

CorrelationBudget correlation_k_budget(int n, double xi, int m);

// Dense oracle: contract the vertex tensors explicitly (legs keyed by edge
// id, u-side slot-permuted and decorated to match the weld convention,
// optional 2^k operator inserted per edge on the v side of its decoration).
// Result legs follow graph.boundary_legs order. Refuses networks whose
// boundary exceeds max_slots qubit slots.
tn::DenseTensor dense_boundary_state(const tiling::TilingGraph& graph,
                                     const hit::HitSpec& spec,
                                     const std::map<int, Mat2>& holonomies = {},
                                     const std::map<int, Mat>& edge_ops = {},
                                     int max_slots = 26);

}  // namespace hitlab::net
