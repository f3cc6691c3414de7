#include "hitlab/tiling.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "hitlab/hyperbolic.hpp"

namespace hitlab::tiling {

int TilingGraph::other(int edge_id, int vertex_id) const {
  const Edge& e = edges.at(edge_id);
  require(!e.boundary(), "other: boundary leg has one endpoint");
  if (e.u == vertex_id) return e.v;
  if (e.v == vertex_id) return e.u;
  throw ValidationError("other: vertex not on edge");
}

namespace {

// Incremental patch under face completion. Slots are counterclockwise; a face
// walk arrives at a vertex through slot a and leaves through slot a-1, so the
// face occupies the sector between exit and entry slots.
struct Builder {
  int p, q;
  std::vector<Vertex> verts;
  std::vector<Edge> edges;
  std::vector<std::vector<char>> corner_done;  // face in sector (s, s+1) done

  Builder(int p_, int q_) : p(p_), q(q_) {}

  int new_vertex(int layer) {
    int id = int(verts.size());
    verts.push_back({id, layer, std::vector<int>(q, -1)});
    corner_done.emplace_back(q, 0);
    return id;
  }

  int edge_at(int v, int s) const { return verts[v].edges[s]; }

  void add_edge(int u, int su, int v, int sv) {
    require(edge_at(u, su) < 0 && edge_at(v, sv) < 0, "face closure: slot occupied");
    int id = int(edges.size());
    edges.push_back({id, u, su, v, sv});
    verts[u].edges[su] = id;
    verts[v].edges[sv] = id;
  }

  // follow the edge leaving v through slot s; returns (vertex, arrival slot)
  std::pair<int, int> step(int v, int s) const {
    const Edge& e = edges[edge_at(v, s)];
    if (e.u == v && e.su == s) return {e.v, e.sv};
    return {e.u, e.su};
  }

  void mark_face(int v0, int c) {
    int v = v0, s = c;
    for (int i = 0; i < p; ++i) {
      corner_done[v][s] = 1;
      auto [w, a] = step(v, s);
      v = w;
      s = (a - 1 + q) % q;
    }
    require(v == v0 && s == c, "face mark: walk did not close");
  }

  void complete_face(int v0, int c, int layer) {
    // forward along existing edges from the exit slot
    int fv = v0, fs = c, used = 0;
    while (edge_at(fv, fs) >= 0) {
      auto [w, a] = step(fv, fs);
      ++used;
      if (w == v0 && a == (c + 1) % q) {
        require(used == p, "face walk: closed with wrong length");
        mark_face(v0, c);
        return;
      }
      require(used < p, "face walk: open after p edges");
      fv = w;
      fs = (a - 1 + q) % q;
    }
    // backward along existing edges from the entry slot
    int bv = v0, bs = (c + 1) % q;
    while (edge_at(bv, bs) >= 0) {
      auto [u, b] = step(bv, bs);
      ++used;
      require(used < p, "face walk: open after p edges");
      bv = u;
      bs = (b + 1) % q;
    }
    const int n_new = p - 1 - used;
    require(n_new >= 0, "face walk: too many existing edges");
    int cur = fv, cs = fs;
    for (int i = 0; i < n_new; ++i) {
      int x = new_vertex(layer);
      add_edge(cur, cs, x, 1);  // new vertices: entry slot 1, exit slot 0
      cur = x;
      cs = 0;
    }
    add_edge(cur, cs, bv, bs);
    mark_face(v0, c);
  }
};

}  // namespace

TilingGraph build_tiling(int p, int q, int layers, PatchCenter center) {
  require(p >= 3 && q >= 3, "build_tiling: p and q must be at least 3");
  require((p - 2) * (q - 2) > 4, "build_tiling: (p-2)(q-2) must exceed 4 (hyperbolic)");
  require(layers >= 0, "build_tiling: layers must be non-negative");

  Builder b(p, q);
  if (center == PatchCenter::vertex) {
    b.new_vertex(0);
  } else {
    for (int i = 0; i < p; ++i) b.new_vertex(0);
    for (int i = 0; i < p; ++i) b.add_edge(i, 0, (i + 1) % p, 1);
    b.mark_face(0, 0);
  }

  for (int l = 1; l <= layers; ++l) {
    const int snapshot = int(b.verts.size());
    for (int v = 0; v < snapshot; ++v) {
      if (b.verts[v].layer != l - 1) continue;
      for (int c = 0; c < q; ++c)
        if (!b.corner_done[v][c]) b.complete_face(v, c, l);
    }
  }

  TilingGraph g;
  g.p = p;
  g.q = q;
  g.layers = layers;
  g.vertices = std::move(b.verts);
  g.edges = std::move(b.edges);

  // dangling slots become boundary legs
  for (auto& v : g.vertices)
    for (int s = 0; s < q; ++s)
      if (v.edges[s] < 0) {
        int id = int(g.edges.size());
        g.edges.push_back({id, v.id, s, -1, -1});
        v.edges[s] = id;
      }

  // outer-contour walk: from a leg's slot, scan clockwise (decreasing slot),
  // hopping through interior edges, until the next free slot. This traces the
  // outer face clockwise, so the collected order is reversed at the end.
  int first_leg = -1;
  for (const auto& e : g.edges)
    if (e.boundary()) {
      first_leg = e.id;
      break;
    }
  if (first_leg >= 0) {
    std::vector<int> cw;
    int leg = first_leg;
    do {
      cw.push_back(leg);
      int v = g.edges[leg].u;
      int t = g.edges[leg].su;
      for (;;) {
        t = (t - 1 + q) % q;
        int eid = g.vertices[v].edges[t];
        if (g.edges[eid].boundary()) {
          leg = eid;
          break;
        }
        const Edge& e = g.edges[eid];
        t = (e.u == v && e.su == t) ? e.sv : e.su;
        v = (e.u == v) ? e.v : e.u;
      }
      require(int(cw.size()) <= int(g.edges.size()), "boundary walk does not close");
    } while (leg != first_leg);
    g.boundary_legs.assign(1, cw[0]);
    for (size_t i = cw.size() - 1; i >= 1; --i) g.boundary_legs.push_back(cw[i]);
  }

  int expected_legs = 0;
  for (const auto& e : g.edges) expected_legs += e.boundary() ? 1 : 0;
  require(int(g.boundary_legs.size()) == expected_legs,
          "boundary walk missed legs (patch not a disk)");
  return g;
}

std::vector<int> region_legs(const TilingGraph& g, const BoundaryRegion& r) {
  const int n = g.n_legs();
  require(n > 0, "region_legs: tiling has no boundary");
  require(r.length >= 0 && r.length <= n, "region_legs: bad length");
  require(r.start >= 0 && r.start < n, "region_legs: bad start");
  std::vector<int> out;
  for (int i = 0; i < r.length; ++i) out.push_back(g.boundary_legs[(r.start + i) % n]);
  return out;
}

namespace {

// unit-capacity max flow
struct Dinic {
  struct Arc {
    int to, cap, rev, tag;
  };
  std::vector<std::vector<Arc>> g;
  std::vector<int> level, iter;

  explicit Dinic(int n) : g(n) {}

  void add_arc(int u, int v, int cap, int tag) {
    g[u].push_back({v, cap, int(g[v].size()), tag});
    g[v].push_back({u, 0, int(g[u].size()) - 1, tag});
  }

  void add_undirected(int u, int v, int tag) {
    g[u].push_back({v, 1, int(g[v].size()), tag});
    g[v].push_back({u, 1, int(g[u].size()) - 1, tag});
  }

  bool bfs(int s, int t) {
    level.assign(g.size(), -1);
    std::queue<int> qu;
    level[s] = 0;
    qu.push(s);
    while (!qu.empty()) {
      int v = qu.front();
      qu.pop();
      for (const Arc& a : g[v])
        if (a.cap > 0 && level[a.to] < 0) {
          level[a.to] = level[v] + 1;
          qu.push(a.to);
        }
    }
    return level[t] >= 0;
  }

  int dfs(int v, int t, int f) {
    if (v == t) return f;
    for (int& i = iter[v]; i < int(g[v].size()); ++i) {
      Arc& a = g[v][i];
      if (a.cap > 0 && level[v] < level[a.to]) {
        int d = dfs(a.to, t, std::min(f, a.cap));
        if (d > 0) {
          a.cap -= d;
          g[a.to][a.rev].cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  int max_flow(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      iter.assign(g.size(), 0);
      while (int f = dfs(s, t, 1 << 30)) flow += f;
    }
    return flow;
  }

  // nodes with a residual path to t
  std::vector<char> reaches_t(int t) {
    std::vector<char> mark(g.size(), 0);
    std::queue<int> qu;
    mark[t] = 1;
    qu.push(t);
    while (!qu.empty()) {
      int y = qu.front();
      qu.pop();
      for (const Arc& a : g[y]) {
        // residual arc (a.to -> y) is the reverse entry
        if (!mark[a.to] && g[a.to][a.rev].cap > 0) {
          mark[a.to] = 1;
          qu.push(a.to);
        }
      }
    }
    return mark;
  }
};

}  // namespace

Cut minimal_cut(const TilingGraph& g, const BoundaryRegion& region) {
  const int n = g.n_legs();
  require(region.length >= 1 && region.length < n, "minimal_cut: region must be a proper arc");
  std::vector<char> in_region_leg(g.edges.size(), 0);
  for (int leg : region_legs(g, region)) in_region_leg[leg] = 1;

  const int V = int(g.vertices.size());
  const int S = V, T = V + 1;
  Dinic d(V + 2);
  for (const Edge& e : g.edges) {
    if (e.boundary()) {
      if (in_region_leg[e.id])
        d.add_arc(S, e.u, 1, e.id);
      else
        d.add_arc(e.u, T, 1, e.id);
    } else {
      d.add_undirected(e.u, e.v, e.id);
    }
  }
  const int flow = d.max_flow(S, T);
  std::vector<char> to_t = d.reaches_t(T);

  Cut cut;
  cut.gaps = {region.start, (region.start + region.length) % n};
  auto a_side = [&](int v) { return !to_t[v]; };
  for (const Edge& e : g.edges) {
    if (e.boundary()) {
      if (in_region_leg[e.id] ? !a_side(e.u) : a_side(e.u)) cut.edges.push_back(e.id);
    } else if (a_side(e.u) != a_side(e.v)) {
      cut.edges.push_back(e.id);
    }
  }
  require(int(cut.edges.size()) == flow, "minimal_cut: cut size disagrees with flow");
  for (int v = 0; v < V; ++v)
    if (a_side(v)) cut.wedge.push_back(v);
  return cut;
}

int graph_length(const Cut& cut) { return int(cut.edges.size()); }

namespace {

std::vector<int> greedy_closure(const TilingGraph& g, const std::vector<int>& legs,
                                const IsometryRuleSet& rules) {
  const int V = int(g.vertices.size());
  std::vector<char> in_w(V, 0);
  std::vector<int> absorbed(V, 0);  // absorbed legs/edges per vertex
  for (int leg : legs) absorbed[g.edges[leg].u] += 1;

  auto absorb = [&](int v) {
    if (in_w[v]) return;
    in_w[v] = 1;
    for (int eid : g.vertices[v].edges) {
      const Edge& e = g.edges[eid];
      if (e.boundary()) continue;
      int w = (e.u == v) ? e.v : e.u;
      if (!in_w[w]) absorbed[w] += 1;
    }
  };

  bool changed = true;
  while (changed) {
    changed = false;
    if (rules.single_a) {
      for (int v = 0; v < V; ++v)
        if (!in_w[v] && absorbed[v] >= g.q - 1) {
          absorb(v);
          changed = true;
        }
    }
    if (rules.paired_aba) {
      for (const Edge& e : g.edges) {
        if (e.boundary() || in_w[e.u] || in_w[e.v]) continue;
        // shared edge not absorbed on either side; all but one of the
        // remaining legs absorbed at both endpoints
        if (absorbed[e.u] >= g.q - 2 && absorbed[e.v] >= g.q - 2) {
          absorb(e.u);
          absorb(e.v);
          changed = true;
        }
      }
    }
  }
  std::vector<int> out;
  for (int v = 0; v < V; ++v)
    if (in_w[v]) out.push_back(v);
  return out;
}

}  // namespace

WedgeResult greedy_wedge(const TilingGraph& g, const BoundaryRegion& region,
                         const IsometryRuleSet& rules) {
  const int n = g.n_legs();
  require(region.length >= 0 && region.length <= n, "greedy_wedge: bad region");
  std::vector<int> legs_a = region_legs(g, region);
  BoundaryRegion comp{(region.start + region.length) % n, n - region.length};
  std::vector<int> legs_c = region_legs(g, comp);

  WedgeResult r;
  r.wedge = greedy_closure(g, legs_a, rules);
  std::vector<int> wc = greedy_closure(g, legs_c, rules);
  std::vector<char> covered(g.vertices.size(), 0);
  for (int v : r.wedge) covered[v] = 1;
  for (int v : wc) covered[v] = 1;
  for (int v = 0; v < int(g.vertices.size()); ++v)
    if (!covered[v]) r.strip.push_back(v);
  return r;
}

std::string tiling_to_json(const TilingGraph& g) {
  nlohmann::json j;
  j["p"] = g.p;
  j["q"] = g.q;
  j["layers"] = g.layers;
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (const auto& v : g.vertices)
    vs.push_back({{"id", v.id}, {"layer", v.layer}, {"edges", v.edges}});
  auto& es = j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges) {
    nlohmann::json ends;
    if (e.boundary())
      ends = {e.u, "boundary"};
    else
      ends = {e.u, e.v};
    es.push_back({{"id", e.id}, {"ends", ends}});
  }
  j["boundary"] = g.boundary_legs;
  return j.dump(2);
}

TilingGraph tiling_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("tiling JSON parse error: ") + e.what());
  }
  try {
    TilingGraph g;
    g.p = j.at("p").get<int>();
    g.q = j.at("q").get<int>();
    g.layers = j.at("layers").get<int>();
    for (const auto& v : j.at("vertices")) {
      Vertex vert;
      vert.id = v.at("id").get<int>();
      vert.layer = v.at("layer").get<int>();
      vert.edges = v.at("edges").get<std::vector<int>>();
      require(int(vert.edges.size()) == g.q, "tiling JSON: vertex valence != q");
      require(vert.id == int(g.vertices.size()), "tiling JSON: vertex ids not sequential");
      g.vertices.push_back(std::move(vert));
    }
    for (const auto& e : j.at("edges")) {
      Edge edge;
      edge.id = e.at("id").get<int>();
      require(edge.id == int(g.edges.size()), "tiling JSON: edge ids not sequential");
      const auto& ends = e.at("ends");
      require(ends.size() == 2, "tiling JSON: edge needs two ends");
      edge.u = ends[0].get<int>();
      if (ends[1].is_string()) {
        require(ends[1].get<std::string>() == "boundary", "tiling JSON: bad end marker");
        edge.v = -1;
      } else {
        edge.v = ends[1].get<int>();
      }
      g.edges.push_back(edge);
    }
    // recover slots from the per-vertex cyclic edge lists
    for (const auto& v : g.vertices)
      for (int s = 0; s < g.q; ++s) {
        int eid = v.edges[s];
        require(eid >= 0 && eid < int(g.edges.size()), "tiling JSON: bad edge ref");
        Edge& e = g.edges[eid];
        if (e.u == v.id && e.su < 0) {
          e.su = s;
        } else if (!e.boundary() && e.v == v.id && e.sv < 0) {
          e.sv = s;
        } else {
          throw ValidationError("tiling JSON: edge/vertex incidence mismatch");
        }
      }
    for (const Edge& e : g.edges)
      require(e.su >= 0 && (e.boundary() || e.sv >= 0), "tiling JSON: dangling edge record");
    g.boundary_legs = j.at("boundary").get<std::vector<int>>();
    int n_legs = 0;
    for (const Edge& e : g.edges) n_legs += e.boundary() ? 1 : 0;
    require(int(g.boundary_legs.size()) == n_legs, "tiling JSON: boundary list size mismatch");
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("tiling JSON structure error: ") + e.what());
  }
}

std::string tiling_to_svg(const TilingGraph& g, const Cut* cut) {
  hyp::Layout lay = hyp::layout(g);
  std::vector<char> in_cut(g.edges.size(), 0);
  if (cut)
    for (int e : cut->edges) in_cut.at(e) = 1;

  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(5);
  auto sx = [](double x) { return 400 + 380 * x; };
  auto sy = [](double y) { return 400 - 380 * y; };  // SVG y runs down
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  svg << "<circle cx=\"400\" cy=\"400\" r=\"380\" fill=\"none\" stroke=\"#bbb\"/>\n";
  const double stub = 0.45 * std::tanh(hyp::edge_length(g.p, g.q) / 4.0);
  for (const Edge& e : g.edges) {
    hyp::P a = lay.pos[e.u];
    hyp::P b;
    if (e.boundary()) {
      double th = lay.slot_dir[e.u][e.su];
      b = hyp::mobius_translate(a, stub * hyp::P(std::cos(th), std::sin(th)));
    } else {
      b = lay.pos[e.v];
    }
    const char* style = in_cut[e.id] ? "stroke=\"#d22\" stroke-width=\"3\" stroke-dasharray=\"6 3\""
                                     : (e.boundary() ? "stroke=\"#888\" stroke-width=\"1\""
                                                     : "stroke=\"#336\" stroke-width=\"1.5\"");
    svg << "<line x1=\"" << sx(a.real()) << "\" y1=\"" << sy(a.imag()) << "\" x2=\""
        << sx(b.real()) << "\" y2=\"" << sy(b.imag()) << "\" " << style << "/>\n";
  }
  std::vector<char> in_wedge(g.vertices.size(), 0);
  if (cut)
    for (int v : cut->wedge) in_wedge.at(v) = 1;
  for (const auto& v : g.vertices) {
    hyp::P z = lay.pos[v.id];
    svg << "<circle cx=\"" << sx(z.real()) << "\" cy=\"" << sy(z.imag())
        << "\" r=\"3.5\" fill=\"" << (cut && in_wedge[v.id] ? "#d22" : "#123") << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hitlab::tiling
