// Poincare-disk geometry for (p,q) tilings: an independent breadth-first
// enumerator of patch counts (used as a test oracle) and a coordinate layout
// for drawing combinatorial patches.
#pragma once

#include <complex>
#include <vector>

#include "hitlab/tiling.hpp"

namespace hitlab::hyp {

using P = std::complex<double>;

// Hyperbolic translation moving the origin to z: w -> (w + z) / (1 + conj(z) w).
P mobius_translate(P z, P w);

double hyperbolic_distance(P a, P b);

// Edge length of the regular (p,q) tiling: cosh(s/2) = cos(pi/p) / sin(pi/q).
double edge_length(int p, int q);

// Vertex-to-adjacent-face-center distance: cosh(R) = cot(pi/p) cot(pi/q).
double face_circumradius(int p, int q);

struct GeoCounts {
  int vertices = 0;
  int edges = 0;
  int legs = 0;
  std::vector<int> layer_vertices;  // new vertices per layer, layer 0 first
};

// Breadth-first geometric enumeration of the vertex-centered patch: walks
// face centers and corners by Mobius arithmetic, deduplicating points by
// position. Independent of build_tiling.
GeoCounts enumerate_counts(int p, int q, int layers);

struct Layout {
  std::vector<P> pos;                        // per vertex id
  std::vector<std::vector<double>> slot_dir; // absolute direction per (vertex, slot)
};

Layout layout(const tiling::TilingGraph& g);

}  // namespace hitlab::hyp
