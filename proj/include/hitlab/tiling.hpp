// Finite patches of hyperbolic (p,q) tilings as combinatorial planar graphs,
// with boundary regions, minimal cuts (max-flow), greedy causal wedges, and
// JSON/SVG export.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hitlab/common.hpp"

namespace hitlab::tiling {

struct Vertex {
  int id = 0;
  int layer = 0;
  std::vector<int> edges;  // edge id per slot, counterclockwise, size q
};

// v == -1 marks a boundary leg dangling from u at slot su.
struct Edge {
  int id = 0;
  int u = -1;
  int su = -1;
  int v = -1;
  int sv = -1;
  bool boundary() const { return v < 0; }
};

struct TilingGraph {
  int p = 0;
  int q = 0;
  int layers = 0;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<int> boundary_legs;  // edge ids, counterclockwise around the patch

  int n_legs() const { return int(boundary_legs.size()); }
  // other endpoint of an interior edge
  int other(int edge_id, int vertex_id) const;
};

enum class PatchCenter { vertex, tile };

// Layer-by-layer patch: layer 0 is a single q-valent vertex (or one p-gon for
// tile-centered patches); each layer completes every p-gon with a corner at a
// previous-layer vertex. Deterministic ids, boundary counterclockwise.
TilingGraph build_tiling(int p, int q, int layers,
                         PatchCenter center = PatchCenter::vertex);

// Contiguous arc of boundary legs [start, start+length) in cyclic order.
struct BoundaryRegion {
  int start = 0;
  int length = 0;
};

std::vector<int> region_legs(const TilingGraph& g, const BoundaryRegion& r);

struct Cut {
  std::vector<int> edges;    // edge ids crossed (interior edges and legs)
  std::pair<int, int> gaps;  // boundary gap positions the cut spans
  std::vector<int> wedge;    // region-side vertex ids (entanglement wedge)
};

// Minimum-cardinality edge cut separating region legs from complement legs;
// among minimum cuts returns the one with the largest region-side vertex set.
Cut minimal_cut(const TilingGraph& g, const BoundaryRegion& region);

int graph_length(const Cut& cut);

// Local moves licensed by the network's isometry relations.
struct IsometryRuleSet {
  bool single_a = true;    // vertex with all legs but one absorbed
  bool b_unitary = true;   // push through edge unitaries (no combinatorial effect)
  bool paired_aba = true;  // adjacent pair with all legs but one each absorbed
};

struct WedgeResult {
  std::vector<int> wedge;  // greedy fixed point grown from the region
  std::vector<int> strip;  // vertices in neither wedge(A) nor wedge(complement)
};

WedgeResult greedy_wedge(const TilingGraph& g, const BoundaryRegion& region,
                         const IsometryRuleSet& rules = {});

std::string tiling_to_json(const TilingGraph& g);
TilingGraph tiling_from_json(const std::string& text);

// Poincare-disk drawing; straight chords, combinatorics is authoritative.
std::string tiling_to_svg(const TilingGraph& g, const Cut* cut = nullptr);

}  // namespace hitlab::tiling
