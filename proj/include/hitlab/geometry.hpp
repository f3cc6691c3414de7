// Geometric observables on hyperinvariant tensor-network states: length
// operator contributions per spin, cut expectations and variances (including
// the strip-corrected case), spin-basis area decomposition with a grasping
// oracle, vertex angles, and polygon curvature deficits.
#pragma once

#include <map>
#include <vector>

#include "hitlab/common.hpp"
#include "hitlab/hit.hpp"
#include "hitlab/network.hpp"
#include "hitlab/tiling.hpp"

namespace hitlab::geom {

struct LengthReport {
  // Keys are doubled spins 2j. prob_j holds <A|P^j|A> on one leg of the
  // normalized vertex state; per_j holds the length weight
  // l_j = sqrt(j(j+1)) * prob_j^2.
  std::map<int, double> per_j;
  std::map<int, double> prob_j;
  double c_A = 0.0;         // sum_j l_j
  double expectation = 0.0; // c_A * graph length of the cut (c_A itself for
                            // the single-leg report)
  double variance = 0.0;    // L * sum_j l_j (sqrt(j(j+1)) - c_A)
};

// Per-spin length weights of one leg, evaluated densely on the single vertex
// with the projectors of spin_projectors(k) embedded on the leg's slots.
LengthReport length_contribution(const hit::HitSpec& spec, int leg);

// Length expectation over a cut: every crossed edge contributes c_A, so the
// expectation is c_A times the graph length. The variance field carries the
// strip-free closed form.
LengthReport length_expectation(const net::NetworkState& state, const tiling::Cut& cut);

// Variance of the cut length. With an empty strip the closed form
// L * sum_j l_j (sqrt(j(j+1)) - c_A) applies; a non-empty strip signals that
// the crossing probabilities no longer factor between edges, and the first
// and second moments are then evaluated exactly from joint projector
// insertions on the assembled state.
double length_variance(const net::NetworkState& state, const tiling::Cut& cut,
                       const std::vector<int>& strip);

// Exact <prod_x P^{j_x}_x> on the assembled state: each interior edge is cut
// open and re-welded through its stored holonomy with the projector applied
// on the way; boundary legs take the projector directly on their slots.
double edge_projector_expectation(const net::NetworkState& state,
                                  const std::vector<int>& edges,
                                  const std::vector<int>& twice_js);

struct SpinBasisElement {
  std::vector<int> labels;  // per-leg doubled spin (an occurrence index is
                            // appended when a label tuple repeats)
  double norm = 0.0;        // Hilbert-Schmidt norm of the stored tensor
  tn::DenseTensor tensor;   // unnormalized basis tensor, q legs of k slots
};

struct SpinBasisDecomposition {
  std::vector<SpinBasisElement> basis;
  std::map<std::vector<int>, cd> coeffs;  // overlap with the normalized element
};

// Orthogonal basis of the invariant subspace graded by per-leg total spin.
// q=3, k=2 is built exactly from the drawn diagrams (per-leg singlet arcs,
// symmetrizers joined by parallel lines or crossing arcs); other shapes use
// the projector construction on the invariant subspace.
SpinBasisDecomposition spin_basis(int q, int k);

// The projector construction for any shape (orthonormalized sector
// projections of the invariant subspace); exposed so the drawn q=3, k=2
// basis can be cross-validated against it.
SpinBasisDecomposition spin_basis_generic(int q, int k);

// Expansion coefficients of the vertex tensor in the spin basis:
// c = <A_labels|A> / (n_labels * ||A||).
SpinBasisDecomposition decompose_vertex(const hit::HitSpec& spec);

// Area eigenvalue of a three-valent vertex with the given doubled spins,
// s = sqrt((9/4)[2(DjDk + DjDl + DlDk) - (Dj^2 + Dk^2 + Dl^2)] - (Dj+Dk+Dl)/2)
// with Dj = -j(j+1).
double area_eigenvalue(int twice_j1, int twice_j2, int twice_j3);

// Independent oracle: builds the squared area operator from angular-momentum
// generator insertions (cross products of the leg generators over leg pairs,
// signs from the planar cyclic order), applies it to the unique three-valent
// intertwiner, and returns the square root of the eigenvalue.
double grasp_area_oracle(int twice_j1, int twice_j2, int twice_j3);

struct AreaReport {
  SpinBasisDecomposition decomposition;
  std::map<std::vector<int>, double> eigenvalues;  // s per label tuple
  double expectation = 0.0;        // sum over labels of |c|^2 * s
  double single_weight_sum = 0.0;  // variant counting each unordered label
                                   // multiset once; some tabulations quote
                                   // this number instead of the full sum
};

// Area expectation of a single three-valent vertex via the spin-basis
// decomposition.
AreaReport vertex_area(const hit::HitSpec& spec);

// Area of a surface crossing the given number of vertices: additive in the
// vertex count.
double surface_area(const hit::HitSpec& spec, int n_vertices);

struct VertexAngle {
  double cos_theta = 0.0;
  double theta = 0.0;
  double alpha = 0.0;  // interior angle pi - theta
};

// Angle between two legs from the grasped states X(e)A, with X(e) the total
// angular momentum on the leg's slots:
// cos theta = <X(e1)A, X(e2)A> / (||X(e1)A|| ||X(e2)A||), summed over the
// three vector components.
VertexAngle vertex_angle(const hit::HitSpec& spec, int e1, int e2);

struct PolygonCurvature {
  double sum = 0.0;      // sum of corner multiplicities times alpha
  double deficit = 0.0;  // (n-2)*pi - sum for an n-corner polygon
};

// Angle sum and curvature deficit of a polygon whose corner angles are
// integer multiples of a single vertex angle alpha.
PolygonCurvature polygon_angle_sum(double alpha, const std::vector<int>& pattern);

}  // namespace hitlab::geom
