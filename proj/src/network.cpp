#include <algorithm>
#include <cmath>
#include <utility>

#include "hitlab/network.hpp"

namespace hitlab::net {

namespace {

constexpr double TOL_UNITARY = 1e-9;
constexpr double TOL_ZERO_LOOP = 1e-12;

// Global port id of (vertex, leg, slot line); ports index every tensor slot
// in the network before welding.
long port_id(int v, int leg, int line, int q, int k) {
  return (long(v) * q + leg) * k + line;
}

struct WalkTables {
  int q = 0, k = 0;
  std::vector<long> mate;       // other endpoint of the vertex pair
  std::vector<char> a_side;     // true at the pair's first slot
  std::vector<long> weld;       // welded port across the edge, -1 if none
  std::vector<int> weld_edge;   // interior edge id of the weld
  std::vector<char> weld_u;     // true on the edge's u side
  std::vector<long> bslot;      // boundary slot number, -1 for interior ports
};

WalkTables build_tables(const tiling::TilingGraph& g, const hit::HitSpec& spec) {
  const int q = spec.q, k = spec.k;
  const long ports = long(g.vertices.size()) * q * k;
  WalkTables t;
  t.q = q;
  t.k = k;
  t.mate.assign(ports, -1);
  t.a_side.assign(ports, 0);
  t.weld.assign(ports, -1);
  t.weld_edge.assign(ports, -1);
  t.weld_u.assign(ports, 0);
  t.bslot.assign(ports, -1);

  for (const auto& v : g.vertices)
    require(int(v.edges.size()) == q, "assemble: malformed tiling: vertex valence differs from q");

  for (const auto& v : g.vertices)
    for (const auto& p : spec.pairs) {
      const long pa = port_id(v.id, p.leg_a, p.slot_a, q, k);
      const long pb = port_id(v.id, p.leg_b, p.slot_b, q, k);
      require(t.mate[pa] < 0 && t.mate[pb] < 0, "assemble: vertex pairing reuses a slot");
      t.mate[pa] = pb;
      t.mate[pb] = pa;
      t.a_side[pa] = 1;
    }
  if (k > 0)
    for (long p = 0; p < ports; ++p)
      require(t.mate[p] >= 0, "assemble: vertex pairing leaves a slot unmatched");

  const std::vector<int> pi = k > 0 ? spec.edge_perm() : std::vector<int>{};
  for (const auto& e : g.edges) {
    if (e.boundary()) continue;
    for (int j = 0; j < k; ++j) {
      const long pu = port_id(e.u, e.su, pi[j], q, k);
      const long pv = port_id(e.v, e.sv, j, q, k);
      require(t.weld[pu] < 0 && t.weld[pv] < 0, "assemble: malformed tiling: slot welded twice");
      t.weld[pu] = pv;
      t.weld[pv] = pu;
      t.weld_edge[pu] = t.weld_edge[pv] = e.id;
      t.weld_u[pu] = 1;
    }
  }

  for (int b = 0; b < g.n_legs(); ++b) {
    const auto& e = g.edges.at(g.boundary_legs[b]);
    require(e.boundary(), "assemble: boundary list names an interior edge");
    for (int j = 0; j < k; ++j) t.bslot[port_id(e.u, e.su, j, q, k)] = long(b) * k + j;
  }
  return t;
}

}  // namespace

NetworkState assemble(const tiling::TilingGraph& graph, const hit::HitSpec& spec,
                      const std::map<int, Mat2>& holonomies) {
  require(!graph.vertices.empty(), "assemble: empty tiling");
  require(spec.family != hit::Family::custom,
          "assemble: custom tensors have no pair decomposition; use dense_boundary_state");
  require(graph.q == spec.q, "assemble: tensor valence does not match tiling valence");
  for (const auto& [eid, H] : holonomies) {
    require(eid >= 0 && eid < int(graph.edges.size()), "assemble: holonomy on unknown edge");
    require(!graph.edges[eid].boundary(), "assemble: holonomy on a boundary leg");
    require((H.adjoint() * H - Mat2::Identity()).norm() <= TOL_UNITARY,
            "assemble: holonomy is not unitary");
  }

  const int q = spec.q, k = spec.k;
  const long ports = long(graph.vertices.size()) * q * k;
  const WalkTables t = build_tables(graph, spec);
  const Mat2 eps = tn::eps_form();
  const Mat2 ident = Mat2::Identity();
  auto weld_form = [&](long port) -> Mat2 {
    const auto it = holonomies.find(t.weld_edge[port]);
    const Mat2& H = it == holonomies.end() ? ident : it->second;
    return t.weld_u[port] ? H : Mat2(H.transpose());
  };

  NetworkState st;
  st.graph = graph;
  st.spec = spec;
  st.holonomies = holonomies;
  st.pairing.slots = graph.n_legs() * k;

  std::vector<char> visited(ports, 0);
  // Chains from boundary ports, in boundary-slot order so each surviving pair
  // is emitted from its smaller slot.
  std::vector<long> port_of_slot(st.pairing.slots, -1);
  for (long p = 0; p < ports; ++p)
    if (t.bslot[p] >= 0) port_of_slot[t.bslot[p]] = p;

  for (long s0 = 0; s0 < st.pairing.slots; ++s0) {
    const long start = port_of_slot[s0];
    if (visited[start]) continue;
    Mat2 M = ident, M0 = ident;
    std::vector<int> crossed;
    long cur = start;
    for (long steps = 0; ; ++steps) {
      require(steps <= ports, "assemble: chain walk does not terminate");
      const long nx = t.mate[cur];
      const Mat2 F = t.a_side[cur] ? eps : Mat2(eps.transpose());
      M = M * F;
      M0 = M0 * F;
      visited[cur] = visited[nx] = 1;
      cur = nx;
      if (t.bslot[cur] >= 0) break;
      const long w = t.weld[cur];
      require(w >= 0, "assemble: dangling internal slot");
      M = M * weld_form(cur);
      crossed.push_back(t.weld_edge[cur]);
      visited[w] = 1;
      cur = w;
    }
    st.pairing.pairs.push_back({int(s0), int(t.bslot[cur]), M});
    st.skeleton_forms.push_back(M0);
    st.chain_edges.push_back(std::move(crossed));
  }

  // Remaining ports close into loops; each contributes its trace to the scalar.
  for (long p0 = 0; p0 < ports; ++p0) {
    if (visited[p0]) continue;
    Mat2 M = ident;
    std::vector<int> crossed;
    long cur = p0;
    for (long steps = 0; ; ++steps) {
      require(steps <= ports, "assemble: loop walk does not terminate");
      const long nx = t.mate[cur];
      const Mat2 F = t.a_side[cur] ? eps : Mat2(eps.transpose());
      M = M * F;
      visited[cur] = visited[nx] = 1;
      cur = nx;
      require(t.bslot[cur] < 0, "assemble: interior walk reached the boundary");
      const long w = t.weld[cur];
      require(w >= 0, "assemble: dangling internal slot");
      M = M * weld_form(cur);
      crossed.push_back(t.weld_edge[cur]);
      visited[w] = 1;
      cur = w;
      if (cur == p0) break;
    }
    const cd tr = M(0, 0) + M(1, 1);
    require(std::abs(tr) > TOL_ZERO_LOOP,
            "assemble: a closed chain contracts to zero; the assembled state vanishes");
    st.pairing.scalar *= tr;
    st.loop_values.push_back(tr);
    st.loop_edges.push_back(std::move(crossed));
  }

  if (k > 0) {
    const std::vector<int> pi = spec.edge_perm();
    for (const auto& e : graph.edges)
      if (!e.boundary()) st.pairing.perms[e.id] = pi;
  }
  require(st.pairing.is_perfect_matching(), "assemble: boundary pairing is not a perfect matching");
  return st;
}

double boundary_entropy(const NetworkState& state, const tiling::BoundaryRegion& region) {
  const int n = state.graph.n_legs();
  require(n > 0, "boundary_entropy: tiling has no boundary");
  require(region.length >= 0 && region.length <= n, "boundary_entropy: bad region length");
  require(region.start >= 0 && region.start < n, "boundary_entropy: bad region start");
  const int k = state.spec.k;
  std::vector<int> slots;
  slots.reserve(long(region.length) * k);
  for (int i = 0; i < region.length; ++i) {
    const int pos = (region.start + i) % n;
    for (int j = 0; j < k; ++j) slots.push_back(pos * k + j);
  }
  return tn::pairing_entropy(state.pairing, slots);
}

RtFit rt_fit(const NetworkState& state, const std::vector<tiling::BoundaryRegion>& regions) {
  require(regions.size() >= 2, "rt_fit: need at least two regions");
  std::vector<double> S, L;
  for (const auto& r : regions) {
    S.push_back(boundary_entropy(state, r));
    L.push_back(double(tiling::graph_length(tiling::minimal_cut(state.graph, r))));
  }
  const int n = int(regions.size());
  double mS = 0, mL = 0;
  for (int i = 0; i < n; ++i) {
    mS += S[i];
    mL += L[i];
  }
  mS /= n;
  mL /= n;
  double varL = 0, cov = 0;
  for (int i = 0; i < n; ++i) {
    varL += (L[i] - mL) * (L[i] - mL);
    cov += (L[i] - mL) * (S[i] - mS);
  }
  require(varL > 0, "rt_fit: all cuts have the same length; the slope is not identifiable");
  RtFit fit;
  fit.slope = cov / varL;
  fit.intercept = mS - fit.slope * mL;
  for (int i = 0; i < n; ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(S[i] - (fit.slope * L[i] + fit.intercept)));
  return fit;
}

namespace {

// One pairing pair restricted to the kept slots: bit positions within the
// composite kept index (-1 when that endpoint is traced out).
struct KeptPair {
  int bit_a = -1;
  int bit_b = -1;
  Mat2 form;      // skeleton form of the pair
  Mat2 marginal;  // form * form^dagger, used when one endpoint is traced
};

// Normalized expectation of a product of observables over the pairing, each
// acting jointly on its own slot list. Kept index layout: observable i's
// local bit t sits at kept bit base_i + t where base_i counts the slots of
// the observables listed before it. The forms come either from the decorated
// pairs or from the decoration-free skeleton.
cd sandwich_core(const NetworkState& state, const std::vector<const Mat*>& ops,
                 const std::vector<std::vector<int>>& op_slots, bool skeleton) {
  std::vector<int> slot_bit(state.pairing.slots, -1);
  std::vector<int> base(ops.size() + 1, 0);
  for (size_t i = 0; i < ops.size(); ++i) {
    base[i + 1] = base[i] + int(op_slots[i].size());
    const long d = 1L << op_slots[i].size();
    require(ops[i]->rows() == d && ops[i]->cols() == d,
            "correlator: observable dimension must match its slot count");
    for (size_t t = 0; t < op_slots[i].size(); ++t) {
      const int slot = op_slots[i][t];
      require(slot >= 0 && slot < state.pairing.slots, "correlator: slot out of range");
      require(slot_bit[slot] < 0, "correlator: observable slots must be distinct");
      slot_bit[slot] = base[i] + int(t);
    }
  }
  const int m = base[ops.size()];
  require(2 * m <= 24, "correlator: too many slots kept for the dense evaluation");

  std::vector<KeptPair> kept;
  cd norm(1, 0);
  for (size_t i = 0; i < state.pairing.pairs.size(); ++i) {
    const auto& p = state.pairing.pairs[i];
    const Mat2& F = skeleton ? state.skeleton_forms[i] : p.form;
    KeptPair kp;
    kp.bit_a = slot_bit[p.a];
    kp.bit_b = slot_bit[p.b];
    if (kp.bit_a < 0 && kp.bit_b < 0) continue;
    kp.form = F;
    if (kp.bit_a < 0 || kp.bit_b < 0) {
      // route the marginal through the traced endpoint
      kp.marginal = kp.bit_a < 0 ? Mat2(F.adjoint() * F) : Mat2(F * F.adjoint());
      if (kp.bit_a < 0) kp.bit_a = kp.bit_b, kp.bit_b = -1;
      norm *= kp.marginal(0, 0) + kp.marginal(1, 1);
    } else {
      norm *= F.squaredNorm();
    }
    kept.push_back(kp);
  }
  require(std::abs(norm) > 0, "correlator: state has zero norm on the kept slots");

  const long dim = 1L << m;
  cd num(0, 0);
  for (long X = 0; X < dim; ++X) {
    for (long Xp = 0; Xp < dim; ++Xp) {
      cd w(1, 0);
      for (size_t i = 0; i < ops.size() && w != cd(0, 0); ++i) {
        const long di = (1L << op_slots[i].size()) - 1;
        const long xi = (X >> base[i]) & di;
        const long xpi = (Xp >> base[i]) & di;
        w *= (*ops[i])(xpi, xi);
      }
      if (w == cd(0, 0)) continue;
      for (const auto& kp : kept) {
        const int a = int((X >> kp.bit_a) & 1);
        const int ap = int((Xp >> kp.bit_a) & 1);
        if (kp.bit_b < 0) {
          w *= kp.marginal(a, ap);
        } else {
          const int b = int((X >> kp.bit_b) & 1);
          const int bp = int((Xp >> kp.bit_b) & 1);
          w *= kp.form(a, b) * std::conj(kp.form(ap, bp));
        }
        if (w == cd(0, 0)) break;
      }
      num += w;
    }
  }
  return num / norm;
}

// Single-leg observables on the skeleton forms: the i-th listed site
// occupies kept bits [i*k, (i+1)*k), slot s of that leg at bit i*k + s.
cd pairing_sandwich(const NetworkState& state, const std::vector<std::pair<const Mat*, int>>& sites) {
  const int k = state.spec.k;
  const int n = state.graph.n_legs();
  std::vector<const Mat*> ops;
  std::vector<std::vector<int>> op_slots;
  for (const auto& [op, site] : sites) {
    require(site >= 0 && site < n, "correlator: site out of range");
    std::vector<int> slots(k);
    for (int j = 0; j < k; ++j) slots[j] = site * k + j;
    ops.push_back(op);
    op_slots.push_back(std::move(slots));
  }
  return sandwich_core(state, ops, op_slots, true);
}

}  // namespace

cd pairing_expectation(const NetworkState& state, const std::vector<SlotObservable>& obs) {
  require(!state.pairing.pairs.empty(), "pairing_expectation: state has no pairs");
  std::vector<const Mat*> ops;
  std::vector<std::vector<int>> op_slots;
  for (const auto& o : obs) {
    require(!o.slots.empty(), "pairing_expectation: observable needs at least one slot");
    ops.push_back(&o.op);
    op_slots.push_back(o.slots);
  }
  return sandwich_core(state, ops, op_slots, false);
}

cd one_point_expectation(const NetworkState& state, const Mat& obs, int site) {
  return pairing_sandwich(state, {{&obs, site}});
}

cd two_point_correlator(const NetworkState& state, const Mat& obs1, int site1,
                        const Mat& obs2, int site2) {
  require(site1 != site2, "two_point_correlator: sites must be distinct");
  return pairing_sandwich(state, {{&obs1, site1}, {&obs2, site2}});
}

CorrelationBudget correlation_k_budget(int n, double xi, int m) {
  require(n > 0 && n % 2 == 0, "correlation_k_budget: n must be a positive even count");
  require(xi > 0, "correlation_k_budget: correlation length must be positive");
  require(m >= 1, "correlation_k_budget: need at least one shared pair");
  CorrelationBudget b;
  const double denom = std::expm1(1.0 / xi);          // e^{1/xi} - 1
  const double partial = -std::expm1(-n / (2.0 * xi));  // 1 - e^{-n/(2 xi)}
  b.k = 2.0 * m * partial / denom;
  b.k_saturating = 2.0 * std::expm1(n / (2.0 * xi)) / denom;
  b.max_usable_j = long(std::floor(xi * std::log(double(m))));
  b.q_lower_bound = b.k;
  return b;
}

namespace {

// new[..., b, ...] = sum_a M(b, a) old[..., a, ...] on one slot line.
void apply_line_matrix(tn::DenseTensor& t, int leg_id, int line, const Mat2& M) {
  const int pos = t.leg_pos(leg_id);
  require(pos >= 0, "apply_line_matrix: unknown leg");
  const long mask = 1L << (t.slot_offset(pos) + line);
  const long dim = t.dim();
  for (long i = 0; i < dim; ++i) {
    if (i & mask) continue;
    const cd a0 = t.data[i], a1 = t.data[i | mask];
    t.data[i] = M(0, 0) * a0 + M(0, 1) * a1;
    t.data[i | mask] = M(1, 0) * a0 + M(1, 1) * a1;
  }
}

// new[..., y, ...] = sum_z O(y, z) old[..., z, ...] on a whole leg.
void apply_leg_matrix(tn::DenseTensor& t, int leg_id, const Mat& O) {
  const int pos = t.leg_pos(leg_id);
  require(pos >= 0, "apply_leg_matrix: unknown leg");
  const int kk = t.legs[pos].k;
  const long dk = 1L << kk;
  require(O.rows() == dk && O.cols() == dk, "apply_leg_matrix: operator size mismatch");
  const int off = t.slot_offset(pos);
  const long low = (1L << off) - 1;
  const long dim = t.dim();
  std::vector<cd> block(dk);
  for (long outer = 0; outer < dim >> kk; ++outer) {
    const long base = (outer & low) | ((outer & ~low) << kk);
    for (long z = 0; z < dk; ++z) block[z] = t.data[base | (z << off)];
    for (long y = 0; y < dk; ++y) {
      cd acc(0, 0);
      for (long z = 0; z < dk; ++z) acc += O(y, z) * block[z];
      t.data[base | (y << off)] = acc;
    }
  }
}

}  // namespace

tn::DenseTensor dense_boundary_state(const tiling::TilingGraph& graph, const hit::HitSpec& spec,
                                     const std::map<int, Mat2>& holonomies,
                                     const std::map<int, Mat>& edge_ops, int max_slots) {
  require(!graph.vertices.empty(), "dense_boundary_state: empty tiling");
  require(graph.q == spec.q, "dense_boundary_state: tensor valence does not match tiling valence");
  const int k = spec.k;
  require(long(graph.n_legs()) * k <= max_slots, "dense_boundary_state: boundary too large");
  for (const auto& [eid, H] : edge_ops) {
    require(eid >= 0 && eid < int(graph.edges.size()) && !graph.edges[eid].boundary(),
            "dense_boundary_state: operator insertion needs an interior edge");
    (void)H;
  }
  for (const auto& [eid, H] : holonomies) {
    require(eid >= 0 && eid < int(graph.edges.size()) && !graph.edges[eid].boundary(),
            "dense_boundary_state: holonomy needs an interior edge");
    (void)H;
  }

  const std::vector<int> pi = k > 0 ? spec.edge_perm() : std::vector<int>{};
  const tn::DenseTensor base = hit::vertex_dense(spec);
  std::vector<tn::DenseTensor> parts;
  for (const auto& v : graph.vertices) {
    require(int(v.edges.size()) == spec.q,
            "dense_boundary_state: malformed tiling: vertex valence differs from q");
    tn::DenseTensor t = base;
    for (int leg = 0; leg < spec.q; ++leg) {
      const auto& e = graph.edges.at(v.edges[leg]);
      t.legs[leg].id = e.id;
      if (e.boundary()) continue;
      if (e.u == v.id && e.su == leg) {
        // u side: permute slot lines to the v-side labels, then compose the
        // decoration and any inserted operator, reading from u into v.
        if (k > 0) t = tn::permute_leg_slots(t, e.id, pi);
        const auto h = holonomies.find(e.id);
        if (h != holonomies.end())
          for (int j = 0; j < k; ++j) apply_line_matrix(t, e.id, j, h->second.transpose());
        const auto op = edge_ops.find(e.id);
        if (op != edge_ops.end()) apply_leg_matrix(t, e.id, op->second);
      } else {
        t.legs[leg].out = false;
      }
    }
    parts.push_back(std::move(t));
  }

  tn::DenseTensor out = tn::contract_many(std::move(parts));
  require(int(out.legs.size()) == graph.n_legs(), "dense_boundary_state: contraction left extra legs");
  std::vector<int> order;
  for (int b = 0; b < graph.n_legs(); ++b) order.push_back(out.leg_pos(graph.boundary_legs[b]));
  return tn::permute_legs(out, order);
}

}  // namespace hitlab::net
