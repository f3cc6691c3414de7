// Geometric observables on hyperinvariant networks: length weights from leg
// projectors, exact cut moments via edge surgery, the spin-graded invariant
// basis with area eigenvalues and a grasping oracle, vertex angles, and
// polygon curvature.
#include "hitlab/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "hitlab/su2.hpp"
#include "hitlab/tensor.hpp"

namespace hitlab::geom {

namespace {

// sqrt(j(j+1)) for a doubled spin
double spin_weight(int twice_j) {
  return std::sqrt(double(twice_j) * double(twice_j + 2)) / 2.0;
}

int bit(long x, int s) { return int((x >> s) & 1); }

// Apply a 2^k operator to the k slots starting at `off` of a flat 2^total
// amplitude vector (slot s = bit s).
void apply_block(std::vector<cd>& data, int total, int off, int k, const Mat& op) {
  const long dim = 1L << total;
  const long dk = 1L << k;
  const long mask = (dk - 1) << off;
  std::vector<cd> block(dk);
  for (long base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (long z = 0; z < dk; ++z) block[z] = data[base | (z << off)];
    for (long z = 0; z < dk; ++z) {
      cd acc(0, 0);
      for (long w = 0; w < dk; ++w) acc += op(z, w) * block[w];
      data[base | (z << off)] = acc;
    }
  }
}

tn::DenseTensor blank_vertex(int q, int k) {
  tn::DenseTensor t;
  for (int i = 0; i < q; ++i) t.legs.push_back({i, k, true});
  t.data.assign(1L << (q * k), cd(0, 0));
  return t;
}

// The five q=3, k=2 basis tensors exactly as drawn: per-leg singlet arcs for
// spin 0, symmetrized legs for spin 1, linked by parallel arcs (mixed labels)
// or by the symmetrized chain of nearest-neighbour arcs (all spin 1). Arc
// orientations are frozen so the overlap table against the left-right vertex
// reproduces the standard signed coefficients.
SpinBasisDecomposition basis32() {
  const Mat2 E = su2::epsilon();
  const Mat S = su2::symmetrizer(2);
  SpinBasisDecomposition out;

  auto finish = [&](tn::DenseTensor t, std::vector<int> labels) {
    SpinBasisElement el;
    el.labels = std::move(labels);
    el.norm = t.norm();
    el.tensor = std::move(t);
    out.basis.push_back(std::move(el));
  };

  // In-leg singlet arcs are oriented from the second line of the leg to the
  // first; cross arcs between legs run first line to first line, second to
  // second.  This orientation choice fixes the signs of the overlap
  // coefficients below.
  tn::DenseTensor t000 = blank_vertex(3, 2);
  for (long X = 0; X < 64; ++X)
    t000.data[X] = E(bit(X, 1), bit(X, 0)) * E(bit(X, 3), bit(X, 2)) * E(bit(X, 5), bit(X, 4));
  finish(std::move(t000), {0, 0, 0});

  // spin-0 leg s paired internally, legs a and b symmetrized and linked
  auto mixed = [&](int s, int a, int b) {
    tn::DenseTensor t = blank_vertex(3, 2);
    for (long X = 0; X < 64; ++X)
      t.data[X] = E(bit(X, 2 * s + 1), bit(X, 2 * s)) *
                  E(bit(X, 2 * a), bit(X, 2 * b)) * E(bit(X, 2 * a + 1), bit(X, 2 * b + 1));
    apply_block(t.data, 6, 2 * a, 2, S);
    apply_block(t.data, 6, 2 * b, 2, S);
    return t;
  };
  finish(mixed(0, 1, 2), {0, 2, 2});
  finish(mixed(1, 0, 2), {2, 0, 2});
  finish(mixed(2, 0, 1), {2, 2, 0});

  tn::DenseTensor t111 = hit::vertex_dense(hit::make_left_right(3));
  for (int l = 0; l < 3; ++l) apply_block(t111.data, 6, 2 * l, 2, S);
  for (auto& v : t111.data) v = -v;
  finish(std::move(t111), {2, 2, 2});
  return out;
}

}  // namespace

LengthReport length_contribution(const hit::HitSpec& spec, int leg) {
  require(leg >= 0 && leg < spec.q, "length_contribution: leg out of range");
  tn::DenseTensor A = hit::vertex_dense(spec);
  const double norm2 = std::real(tn::hs_inner(A, A));
  require(norm2 > 0, "length_contribution: zero vertex tensor");
  const auto ps = su2::spin_projectors(spec.k);
  const int off = A.slot_offset(A.leg_pos(leg));
  LengthReport rep;
  for (const auto& e : ps.entries) {
    tn::DenseTensor PA = A;
    apply_block(PA.data, A.total_slots(), off, spec.k, e.P);
    const double p = std::real(tn::hs_inner(A, PA)) / norm2;
    rep.prob_j[e.twice_j] = p;
    rep.per_j[e.twice_j] = spin_weight(e.twice_j) * p * p;
    rep.c_A += rep.per_j[e.twice_j];
  }
  rep.expectation = rep.c_A;
  for (const auto& [t, l] : rep.per_j) rep.variance += l * (spin_weight(t) - rep.c_A);
  return rep;
}

LengthReport length_expectation(const net::NetworkState& state, const tiling::Cut& cut) {
  require(state.spec.family != hit::Family::custom,
          "length_expectation: needs an epsilon-pair vertex family");
  LengthReport rep = length_contribution(state.spec, 0);
  const double L = tiling::graph_length(cut);
  rep.expectation = rep.c_A * L;
  rep.variance *= L;
  return rep;
}

double length_variance(const net::NetworkState& state, const tiling::Cut& cut,
                       const std::vector<int>& strip) {
  if (strip.empty()) return length_expectation(state, cut).variance;
  const auto& edges = cut.edges;
  if (edges.empty()) return 0.0;
  std::vector<int> js;
  for (const auto& e : su2::spin_projectors(state.spec.k).entries) js.push_back(e.twice_j);
  // exact first and second moments from joint crossing probabilities; the
  // strip tensors make the probabilities of different edges interdependent
  double m1 = 0.0, m2 = 0.0;
  for (int x : edges)
    for (int t : js) {
      const double p = edge_projector_expectation(state, {x}, {t});
      m1 += spin_weight(t) * p * p;
      m2 += spin_weight(t) * spin_weight(t) * p * p;
    }
  for (size_t a = 0; a < edges.size(); ++a)
    for (size_t b = a + 1; b < edges.size(); ++b)
      for (int t : js)
        for (int u : js) {
          const double p = edge_projector_expectation(state, {edges[a], edges[b]}, {t, u});
          m2 += 2.0 * spin_weight(t) * spin_weight(u) * p * p;
        }
  return m2 - m1 * m1;
}

double edge_projector_expectation(const net::NetworkState& state,
                                  const std::vector<int>& edges,
                                  const std::vector<int>& twice_js) {
  require(!edges.empty() && edges.size() == twice_js.size(),
          "edge_projector_expectation: need one spin label per edge");
  const auto& g = state.graph;
  const int k = state.spec.k;
  const auto ps = su2::spin_projectors(k);
  std::set<int> seen;
  for (int x : edges) {
    require(x >= 0 && x < int(g.edges.size()), "edge_projector_expectation: edge out of range");
    require(seen.insert(x).second, "edge_projector_expectation: edges must be distinct");
  }
  for (int t : twice_js)
    require(ps.has(t), "edge_projector_expectation: no such spin on a k-line leg");

  // open every probed interior edge into two dangling legs appended to the
  // boundary; the removed weld (holonomy included) comes back as a rank-one
  // joint observable on the new legs
  tiling::TilingGraph g2 = g;
  std::map<int, Mat2> hol = state.holonomies;
  struct CutInfo {
    int idx = 0;   // position in `edges`
    int id_u = 0;  // surviving u-side leg (keeps the original id)
    int id_v = 0;  // new v-side leg
    Mat2 H = Mat2::Identity();
  };
  std::vector<CutInfo> cuts;
  for (size_t i = 0; i < edges.size(); ++i) {
    const int x = edges[i];
    if (g.edges[x].boundary()) continue;
    CutInfo ci;
    ci.idx = int(i);
    ci.id_u = x;
    const int ov = g2.edges[x].v;
    const int osv = g2.edges[x].sv;
    g2.edges[x].v = -1;
    g2.edges[x].sv = -1;
    tiling::Edge ne;
    ne.id = int(g2.edges.size());
    ne.u = ov;
    ne.su = osv;
    g2.vertices[ov].edges[osv] = ne.id;
    g2.edges.push_back(ne);
    g2.boundary_legs.push_back(x);
    g2.boundary_legs.push_back(ne.id);
    ci.id_v = ne.id;
    if (auto it = hol.find(x); it != hol.end()) {
      ci.H = it->second;
      hol.erase(it);
    }
    cuts.push_back(ci);
  }

  net::NetworkState assembled;
  const net::NetworkState* work = &state;
  if (!cuts.empty()) {
    assembled = net::assemble(g2, state.spec, hol);
    work = &assembled;
  }

  auto leg_slots = [&](int edge_id) {
    const auto& bl = work->graph.boundary_legs;
    const auto it = std::find(bl.begin(), bl.end(), edge_id);
    require(it != bl.end(), "edge_projector_expectation: leg not on the boundary");
    const int b = int(it - bl.begin());
    std::vector<int> slots(k);
    for (int j = 0; j < k; ++j) slots[j] = b * k + j;
    return slots;
  };

  std::vector<net::SlotObservable> num_obs, den_obs;
  for (size_t i = 0; i < edges.size(); ++i) {
    if (!g.edges[edges[i]].boundary()) continue;
    num_obs.push_back({ps.proj(twice_js[i]), leg_slots(edges[i])});
  }

  const long dk = 1L << k;
  const std::vector<int> per = state.spec.edge_perm();
  for (const auto& ci : cuts) {
    // weld bilinear between the raw u-side index x and the v-side index z
    Mat B(dk, dk);
    for (long x = 0; x < dk; ++x)
      for (long z = 0; z < dk; ++z) {
        cd w(1, 0);
        for (int l = 0; l < k; ++l) w *= ci.H(bit(x, per[l]), bit(z, l));
        B(x, z) = w;
      }
    const Mat KO = B * ps.proj(twice_js[ci.idx]).transpose();
    Eigen::VectorXcd kv(dk * dk), kov(dk * dk);
    for (long x = 0; x < dk; ++x)
      for (long y = 0; y < dk; ++y) {
        kv(x | (y << k)) = B(x, y);
        kov(x | (y << k)) = KO(x, y);
      }
    std::vector<int> slots = leg_slots(ci.id_u);
    const std::vector<int> vs = leg_slots(ci.id_v);
    slots.insert(slots.end(), vs.begin(), vs.end());
    num_obs.push_back({Mat(kv.conjugate() * kov.transpose()), slots});
    den_obs.push_back({Mat(kv.conjugate() * kv.transpose()), slots});
  }

  const cd num = net::pairing_expectation(*work, num_obs);
  if (cuts.empty()) return std::real(num);
  const cd den = net::pairing_expectation(*work, den_obs);
  require(std::abs(den) > 1e-300, "edge_projector_expectation: welded norm vanished");
  return std::real(num / den);
}

SpinBasisDecomposition spin_basis_generic(int q, int k) {
  require(q >= 2 && k >= 1, "spin_basis: need at least two legs and one slot");
  require(q * k <= 12, "spin_basis: shape too large for the dense construction");
  const int total = q * k;
  const Mat inv = su2::invariant_basis(total);
  const auto ps = su2::spin_projectors(k);
  std::vector<int> spins;
  for (const auto& e : ps.entries) spins.push_back(e.twice_j);

  SpinBasisDecomposition out;
  const int ns = int(spins.size());
  std::vector<int> oi(q, 0);
  while (true) {
    std::vector<int> tuple(q);
    for (int l = 0; l < q; ++l) tuple[l] = spins[oi[l]];
    // project every invariant column into this label sector, then
    // orthonormalize what survives
    std::vector<Eigen::VectorXcd> kept;
    for (long c = 0; c < inv.cols(); ++c) {
      std::vector<cd> v(inv.col(c).data(), inv.col(c).data() + inv.rows());
      for (int l = 0; l < q; ++l) apply_block(v, total, l * k, k, ps.proj(tuple[l]));
      Eigen::VectorXcd w = Eigen::Map<Eigen::VectorXcd>(v.data(), long(v.size()));
      for (const auto& u : kept) w -= u.dot(w) * u;
      const double nn = w.norm();
      if (nn > 1e-9) kept.push_back(w / nn);
    }
    for (size_t occ = 0; occ < kept.size(); ++occ) {
      SpinBasisElement el;
      el.labels = tuple;
      if (kept.size() > 1) el.labels.push_back(int(occ));
      el.norm = 1.0;
      el.tensor = blank_vertex(q, k);
      for (long i = 0; i < kept[occ].size(); ++i) el.tensor.data[i] = kept[occ](i);
      out.basis.push_back(std::move(el));
    }
    int l = 0;
    while (l < q && ++oi[l] == ns) oi[l++] = 0;
    if (l == q) break;
  }
  return out;
}

SpinBasisDecomposition spin_basis(int q, int k) {
  if (q == 3 && k == 2) return basis32();
  return spin_basis_generic(q, k);
}

SpinBasisDecomposition decompose_vertex(const hit::HitSpec& spec) {
  SpinBasisDecomposition dec = spin_basis(spec.q, spec.k);
  const tn::DenseTensor A = hit::vertex_dense(spec);
  const double nA = A.norm();
  require(nA > 0, "decompose_vertex: zero vertex tensor");
  for (const auto& el : dec.basis)
    dec.coeffs[el.labels] = tn::hs_inner(el.tensor, A) / (el.norm * nA);
  return dec;
}

double area_eigenvalue(int twice_j1, int twice_j2, int twice_j3) {
  require(twice_j1 >= 0 && twice_j2 >= 0 && twice_j3 >= 0,
          "area_eigenvalue: spins must be non-negative");
  require((twice_j1 + twice_j2 + twice_j3) % 2 == 0 &&
              twice_j3 >= std::abs(twice_j1 - twice_j2) && twice_j3 <= twice_j1 + twice_j2,
          "area_eigenvalue: labels do not admit a three-valent intertwiner");
  const auto D = [](int t) { return -double(t) * double(t + 2) / 4.0; };
  const double a = D(twice_j1), b = D(twice_j2), c = D(twice_j3);
  const double s2 =
      2.25 * (2.0 * (a * b + a * c + c * b) - (a * a + b * b + c * c)) - 0.5 * (a + b + c);
  require(s2 > -1e-12, "area_eigenvalue: negative squared eigenvalue; invalid spin triple");
  return std::sqrt(std::max(0.0, s2));
}

double grasp_area_oracle(int twice_j1, int twice_j2, int twice_j3) {
  const std::array<int, 3> tj{twice_j1, twice_j2, twice_j3};
  for (int t : tj) require(t >= 0, "grasp_area_oracle: spins must be non-negative");
  const std::array<long, 3> d{tj[0] + 1, tj[1] + 1, tj[2] + 1};
  const long D = d[0] * d[1] * d[2];

  // leg generators on the product of the three irreps, leg 0 slowest index
  std::array<std::array<Mat, 3>, 3> X;
  for (int a = 0; a < 3; ++a) {
    const auto J = su2::spin_matrices(tj[a]);
    for (int i = 0; i < 3; ++i) {
      Mat M = Mat::Zero(D, D);
      for (long r = 0; r < D; ++r) {
        std::array<long, 3> idx{r / (d[1] * d[2]), (r / d[2]) % d[1], r % d[2]};
        for (long cI = 0; cI < d[a]; ++cI) {
          auto jdx = idx;
          jdx[a] = cI;
          M(r, (jdx[0] * d[1] + jdx[1]) * d[2] + jdx[2]) += J[i](idx[a], cI);
        }
      }
      X[a][i] = std::move(M);
    }
  }

  Mat C = Mat::Zero(D, D);
  for (int i = 0; i < 3; ++i) {
    const Mat Jt = X[0][i] + X[1][i] + X[2][i];
    C += Jt * Jt;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(C);
  std::vector<long> kernel;
  for (long i = 0; i < D; ++i)
    if (es.eigenvalues()(i) < 1e-9) kernel.push_back(i);
  require(kernel.size() == 1,
          "grasp_area_oracle: labels do not admit a unique three-valent intertwiner");
  const Eigen::VectorXcd v = es.eigenvectors().col(kernel[0]);

  // squared area operator: cross products of leg generators over the three
  // cyclic leg pairs, signs fixed by the planar counterclockwise order
  std::array<Mat, 3> Y{Mat::Zero(D, D), Mat::Zero(D, D), Mat::Zero(D, D)};
  for (int p = 0; p < 3; ++p) {
    const int a = p, b = (p + 1) % 3;
    for (int i = 0; i < 3; ++i)
      Y[i] += X[a][(i + 1) % 3] * X[b][(i + 2) % 3] - X[a][(i + 2) % 3] * X[b][(i + 1) % 3];
  }
  Mat S2 = Mat::Zero(D, D);
  for (int i = 0; i < 3; ++i) S2 += Y[i] * Y[i];

  const double s2 = std::real(v.dot(S2 * v));
  require((S2 * v - s2 * v).norm() < 1e-8 * std::max(1.0, std::abs(s2)),
          "grasp_area_oracle: intertwiner is not an area eigenvector");
  require(s2 > -1e-12, "grasp_area_oracle: negative squared eigenvalue");
  return std::sqrt(std::max(0.0, s2));
}

AreaReport vertex_area(const hit::HitSpec& spec) {
  require(spec.q == 3, "vertex_area: area eigenvalues need a three-valent vertex");
  AreaReport rep;
  rep.decomposition = decompose_vertex(spec);
  std::set<std::vector<int>> seen_class;
  for (const auto& [labels, c] : rep.decomposition.coeffs) {
    const double s = area_eigenvalue(labels[0], labels[1], labels[2]);
    rep.eigenvalues[labels] = s;
    const double w = std::norm(c);
    rep.expectation += w * s;
    std::vector<int> cls(labels.begin(), labels.begin() + 3);
    std::sort(cls.begin(), cls.end());
    // the single-weight variant counts each unordered label multiset once
    // (lexicographically first representative)
    if (seen_class.insert(cls).second) rep.single_weight_sum += w * s;
  }
  return rep;
}

double surface_area(const hit::HitSpec& spec, int n_vertices) {
  require(n_vertices >= 0, "surface_area: vertex count must be non-negative");
  if (n_vertices == 0) return 0.0;
  return double(n_vertices) * vertex_area(spec).expectation;
}

VertexAngle vertex_angle(const hit::HitSpec& spec, int e1, int e2) {
  require(spec.q >= 3, "vertex_angle: needs at least three legs");
  require(e1 >= 0 && e1 < spec.q && e2 >= 0 && e2 < spec.q && e1 != e2,
          "vertex_angle: legs must be distinct and in range");
  const tn::DenseTensor A = hit::vertex_dense(spec);
  const int total = A.total_slots();
  const auto G = su2::total_spin_generators(spec.k);
  const std::array<const Mat*, 3> J{&G.Jx, &G.Jy, &G.Jz};
  const auto grasp = [&](int leg, int i) {
    tn::DenseTensor t = A;
    apply_block(t.data, total, A.slot_offset(A.leg_pos(leg)), spec.k, *J[i]);
    return t;
  };
  cd num(0, 0);
  double n1 = 0.0, n2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const tn::DenseTensor a = grasp(e1, i);
    const tn::DenseTensor b = grasp(e2, i);
    num += tn::hs_inner(a, b);
    n1 += std::real(tn::hs_inner(a, a));
    n2 += std::real(tn::hs_inner(b, b));
  }
  require(n1 > 1e-24 && n2 > 1e-24, "vertex_angle: a grasped leg state vanishes");
  VertexAngle va;
  va.cos_theta = std::clamp(std::real(num) / std::sqrt(n1 * n2), -1.0, 1.0);
  va.theta = std::acos(va.cos_theta);
  va.alpha = M_PI - va.theta;
  return va;
}

PolygonCurvature polygon_angle_sum(double alpha, const std::vector<int>& pattern) {
  require(!pattern.empty(), "polygon_angle_sum: pattern must list at least one corner");
  long total = 0;
  for (int m : pattern) {
    require(m >= 1, "polygon_angle_sum: corner multiplicities must be positive");
    total += m;
  }
  PolygonCurvature pc;
  pc.sum = double(total) * alpha;
  pc.deficit = double(int(pattern.size()) - 2) * M_PI - pc.sum;
  return pc;
}

}  // namespace hitlab::geom
