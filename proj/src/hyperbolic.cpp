#include "hitlab/hyperbolic.hpp"

#include <cmath>
#include <map>
#include <queue>
#include <set>

namespace hitlab::hyp {

namespace {
constexpr double PI = 3.14159265358979323846;
}

P mobius_translate(P z, P w) { return (w + z) / (1.0 + std::conj(z) * w); }

double hyperbolic_distance(P a, P b) {
  double r = std::abs((b - a) / (1.0 - std::conj(a) * b));
  return 2.0 * std::atanh(r);
}

double edge_length(int p, int q) {
  double c = std::cos(PI / p) / std::sin(PI / q);
  require(c > 1.0 + 1e-9, "edge_length: parameters are not hyperbolic");
  return 2.0 * std::acosh(c);
}

double face_circumradius(int p, int q) {
  double c = (std::cos(PI / p) / std::sin(PI / p)) * (std::cos(PI / q) / std::sin(PI / q));
  require(c > 1.0 + 1e-9, "face_circumradius: parameters are not hyperbolic");
  return std::acosh(c);
}

namespace {

// Position store with duplicate detection on a tolerance grid.
struct PointIndex {
  double cell = 1e-5;
  double tol = 1e-6;
  std::map<std::pair<long, long>, std::vector<int>> grid;
  std::vector<P> pts;

  std::pair<long, long> key(P z) const {
    return {long(std::floor(z.real() / cell)), long(std::floor(z.imag() / cell))};
  }

  int find(P z) const {
    auto [kx, ky] = key(z);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = grid.find({kx + dx, ky + dy});
        if (it == grid.end()) continue;
        for (int id : it->second)
          if (std::abs(pts[id] - z) < tol) return id;
      }
    return -1;
  }

  // returns (id, was_new)
  std::pair<int, bool> insert(P z) {
    int id = find(z);
    if (id >= 0) return {id, false};
    id = int(pts.size());
    pts.push_back(z);
    grid[key(z)].push_back(id);
    return {id, true};
  }
};

}  // namespace

GeoCounts enumerate_counts(int p, int q, int layers) {
  require(p >= 3 && q >= 3 && (p - 2) * (q - 2) > 4, "enumerate_counts: not hyperbolic");
  require(layers >= 0, "enumerate_counts: layers must be non-negative");
  const double r_edge = std::tanh(edge_length(p, q) / 2.0);
  const double r_face = std::tanh(face_circumradius(p, q) / 2.0);

  PointIndex verts, faces;
  std::vector<double> ref;    // frame angle per vertex (direction of edge 0)
  std::vector<int> layer_of;  // layer per vertex
  verts.insert(P(0, 0));
  ref.push_back(0.0);
  layer_of.push_back(0);
  std::vector<std::pair<P, int>> all_faces;  // (center, a known corner id)

  for (int l = 1; l <= layers; ++l) {
    const int snapshot = int(verts.pts.size());
    std::vector<std::pair<P, int>> fresh;
    for (int v = 0; v < snapshot; ++v) {
      if (layer_of[v] != l - 1) continue;
      for (int k = 0; k < q; ++k) {
        double th = ref[v] + 2.0 * PI * k / q + PI / q;
        P c = mobius_translate(verts.pts[v], r_face * P(std::cos(th), std::sin(th)));
        if (faces.insert(c).second) fresh.push_back({c, v});
      }
    }
    for (auto& [c, v] : fresh) {
      all_faces.push_back({c, v});
      P delta = (verts.pts[v] - c) / (1.0 - std::conj(c) * verts.pts[v]);
      double alpha = std::arg(delta);
      double rho = std::abs(delta);
      P prev = verts.pts[v];
      for (int j = 1; j < p; ++j) {
        double th = alpha + 2.0 * PI * j / p;
        P x = mobius_translate(c, rho * P(std::cos(th), std::sin(th)));
        auto [id, fresh_vertex] = verts.insert(x);
        if (fresh_vertex) {
          P back = (prev - x) / (1.0 - std::conj(x) * prev);
          ref.push_back(std::arg(back));
          layer_of.push_back(l);
        }
        prev = verts.pts[id];
      }
    }
  }

  // edges: consecutive corners of each completed face, deduplicated
  std::set<std::pair<int, int>> edge_set;
  for (auto& [c, v0] : all_faces) {
    P delta = (verts.pts[v0] - c) / (1.0 - std::conj(c) * verts.pts[v0]);
    double alpha = std::arg(delta);
    double rho = std::abs(delta);
    std::vector<int> corner(p);
    for (int j = 0; j < p; ++j) {
      double th = alpha + 2.0 * PI * j / p;
      P x = mobius_translate(c, rho * P(std::cos(th), std::sin(th)));
      corner[j] = verts.find(x);
      require(corner[j] >= 0, "enumerate_counts: face corner missing");
    }
    for (int j = 0; j < p; ++j) {
      int a = corner[j], b = corner[(j + 1) % p];
      edge_set.insert({std::min(a, b), std::max(a, b)});
    }
  }

  GeoCounts gc;
  gc.vertices = int(verts.pts.size());
  gc.edges = int(edge_set.size());
  gc.legs = q * gc.vertices - 2 * gc.edges;
  gc.layer_vertices.assign(layers + 1, 0);
  for (int l : layer_of) gc.layer_vertices[l] += 1;
  return gc;
}

Layout layout(const tiling::TilingGraph& g) {
  const int V = int(g.vertices.size());
  const int q = g.q;
  Layout lay;
  lay.pos.assign(V, P(0, 0));
  lay.slot_dir.assign(V, std::vector<double>(q, 0.0));
  if (V == 0) return lay;
  const double r_edge = std::tanh(edge_length(g.p, g.q) / 2.0);

  std::vector<char> placed(V, 0);
  placed[0] = 1;
  for (int k = 0; k < q; ++k) lay.slot_dir[0][k] = 2.0 * PI * k / q;
  std::queue<int> qu;
  qu.push(0);
  while (!qu.empty()) {
    int v = qu.front();
    qu.pop();
    for (int s = 0; s < q; ++s) {
      const tiling::Edge& e = g.edges[g.vertices[v].edges[s]];
      if (e.boundary()) continue;
      int w = (e.u == v) ? e.v : e.u;
      if (placed[w]) continue;
      int a = (e.u == v) ? e.sv : e.su;
      double th = lay.slot_dir[v][s];
      P zw = mobius_translate(lay.pos[v], r_edge * P(std::cos(th), std::sin(th)));
      lay.pos[w] = zw;
      P back = (lay.pos[v] - zw) / (1.0 - std::conj(zw) * lay.pos[v]);
      double psi = std::arg(back);
      for (int k = 0; k < q; ++k) lay.slot_dir[w][(a + k) % q] = psi + 2.0 * PI * k / q;
      placed[w] = 1;
      qu.push(w);
    }
  }
  for (int v = 0; v < V; ++v) require(placed[v], "layout: graph is not connected");
  return lay;
}

}  // namespace hitlab::hyp
