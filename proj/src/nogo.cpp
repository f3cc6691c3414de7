// Symmetry no-go certification: sector weights, U(1) invariance, minimal
// two-uniformity deviation over symmetric subspaces, the logical-leg code
// check, balanced-bipartition counting, and the geometric measure of
// distributed singlets.
#include "hitlab/nogo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "hitlab/su2.hpp"

namespace hitlab::nogo {

namespace {

long index_product(const std::vector<int>& dims) {
  long p = 1;
  for (int d : dims) {
    require(d >= 2, "party dimensions must be at least 2");
    p *= d;
  }
  return p;
}

// Strides with site 0 varying fastest.
std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> s(dims.size());
  long acc = 1;
  for (size_t i = 0; i < dims.size(); ++i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

// Apply a local operator to one site of a state vector.
void apply_site(std::vector<cd>& v, const std::vector<int>& dims, int site,
                const Mat& op, std::vector<cd>& scratch) {
  const auto st = strides_of(dims);
  const long dim = long(v.size());
  const int d = dims[site];
  const long stride = st[site];
  scratch.assign(d, cd(0, 0));
  for (long base = 0; base < dim; ++base) {
    if ((base / stride) % d != 0) continue;
    for (int z = 0; z < d; ++z) scratch[z] = v[base + z * stride];
    for (int z = 0; z < d; ++z) {
      cd acc(0, 0);
      for (int w = 0; w < d; ++w) acc += op(z, w) * scratch[w];
      v[base + z * stride] = acc;
    }
  }
}

// Reduced density matrix of a pure state on the listed (ascending) parties.
Mat reduced_on(const std::vector<cd>& state, const std::vector<int>& dims,
               const std::vector<int>& keep) {
  const auto st = strides_of(dims);
  long dk = 1;
  for (int p : keep) dk *= dims[p];
  std::vector<bool> kept(dims.size(), false);
  for (int p : keep) kept[p] = true;

  // enumerate the traced-out configurations and accumulate outer products
  std::vector<int> rest;
  for (size_t i = 0; i < dims.size(); ++i)
    if (!kept[i]) rest.push_back(int(i));
  long dr = 1;
  for (int p : rest) dr *= dims[p];

  Mat rho = Mat::Zero(dk, dk);
  std::vector<cd> col(dk);
  for (long r = 0; r < dr; ++r) {
    long base = 0, rr = r;
    for (int p : rest) {
      base += (rr % dims[p]) * st[p];
      rr /= dims[p];
    }
    for (long x = 0; x < dk; ++x) {
      long idx = base, xx = x;
      for (int p : keep) {
        idx += (xx % dims[p]) * st[p];
        xx /= dims[p];
      }
      col[x] = state[idx];
    }
    for (long a = 0; a < dk; ++a)
      for (long b = 0; b < dk; ++b) rho(a, b) += col[a] * std::conj(col[b]);
  }
  return rho;
}

double hs_norm(const Mat& m) { return std::sqrt(std::real((m.adjoint() * m).trace())); }

double vec_norm(const std::vector<cd>& v) {
  double s = 0;
  for (const cd& x : v) s += std::norm(x);
  return std::sqrt(s);
}

// Minimal Nelder-Mead simplex descent on R^n.
double nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                   Eigen::VectorXd& x, double step, int max_iter) {
  const int n = int(x.size());
  std::vector<Eigen::VectorXd> pts(n + 1, x);
  std::vector<double> val(n + 1);
  for (int i = 1; i <= n; ++i) pts[i](i - 1) += step;
  for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);

  std::vector<int> order(n + 1);
  for (int it = 0; it < max_iter; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return val[a] < val[b]; });
    if (val[order[n]] - val[order[0]] < 1e-14) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[order[i]];
    centroid /= n;
    const int worst = order[n];

    Eigen::VectorXd refl = centroid + (centroid - pts[worst]);
    double fr = f(refl);
    if (fr < val[order[0]]) {
      Eigen::VectorXd exp_ = centroid + 2.0 * (centroid - pts[worst]);
      double fe = f(exp_);
      if (fe < fr) {
        pts[worst] = exp_;
        val[worst] = fe;
      } else {
        pts[worst] = refl;
        val[worst] = fr;
      }
    } else if (fr < val[order[n - 1]]) {
      pts[worst] = refl;
      val[worst] = fr;
    } else {
      Eigen::VectorXd con = centroid + 0.5 * (pts[worst] - centroid);
      double fc = f(con);
      if (fc < val[worst]) {
        pts[worst] = con;
        val[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == order[0]) continue;
          pts[i] = pts[order[0]] + 0.5 * (pts[i] - pts[order[0]]);
          val[i] = f(pts[i]);
        }
      }
    }
  }
  int best = int(std::min_element(val.begin(), val.end()) - val.begin());
  x = pts[best];
  return val[best];
}

// State from real parameters over an orthonormal subspace basis.
std::vector<cd> subspace_state(const Mat& basis, const Eigen::VectorXd& x) {
  const int m = int(basis.cols());
  Eigen::VectorXcd coeff(m);
  for (int i = 0; i < m; ++i) coeff(i) = cd(x(2 * i), x(2 * i + 1));
  double nn = coeff.norm();
  if (nn < 1e-12) coeff(0) = cd(1, 0), nn = 1.0;
  Eigen::VectorXcd psi = basis * (coeff / nn);
  return {psi.data(), psi.data() + psi.size()};
}

}  // namespace

std::vector<Mat> traceless_basis(int d) {
  require(d >= 2, "traceless_basis: dimension must be at least 2");
  std::vector<Mat> out;
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Mat s = Mat::Zero(d, d);
      s(j, k) = s(k, j) = 1.0;
      out.push_back(s);
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Mat a = Mat::Zero(d, d);
      a(j, k) = cd(0, -1);
      a(k, j) = cd(0, 1);
      out.push_back(a);
    }
  for (int l = 1; l < d; ++l) {
    Mat m = Mat::Zero(d, d);
    double f = std::sqrt(2.0 / (double(l) * (l + 1)));
    for (int j = 0; j < l; ++j) m(j, j) = f;
    m(l, l) = -f * l;
    out.push_back(m);
  }
  // d = 2 order is (sigma_x, sigma_y, sigma_z)
  return out;
}

std::vector<int> GeneratorSpec::dims() const {
  std::vector<int> d;
  for (const auto& p : parties) d.push_back(p.dim);
  return d;
}

bool GeneratorSpec::nontrivial() const {
  for (const auto& p : parties)
    for (const auto& [a, b] : p.betas)
      if (std::abs(b) > 0) return true;
  return false;
}

std::vector<cd> GeneratorSpec::apply(const std::vector<cd>& state) const {
  require(!parties.empty(), "generator has no parties");
  const auto dd = dims();
  const long dim = index_product(dd);
  require(long(state.size()) == dim, "generator and state dimensions differ");

  std::vector<cd> out(state.size(), cd(0, 0));
  std::vector<cd> scratch;
  for (size_t i = 0; i < parties.size(); ++i) {
    const auto& p = parties[i];
    Mat local = p.alpha * Mat::Identity(p.dim, p.dim);
    if (!p.betas.empty()) {
      auto basis = traceless_basis(p.dim);
      for (const auto& [a, b] : p.betas) {
        require(a >= 0 && a < int(basis.size()), "generator basis index out of range");
        local += b * basis[a];
      }
    }
    std::vector<cd> term = state;
    apply_site(term, dd, int(i), local, scratch);
    for (size_t x = 0; x < out.size(); ++x) out[x] += term[x];
  }
  return out;
}

GeneratorSpec total_jz(int n_qubits) {
  require(n_qubits >= 1, "total_jz: need at least one qubit");
  GeneratorSpec g;
  for (int i = 0; i < n_qubits; ++i) {
    GeneratorParty p;
    p.dim = 2;
    p.betas[2] = 0.5;  // sigma_z / 2
    g.parties.push_back(p);
  }
  return g;
}

SectorDecomposition sector_weights(const Mat& rho, const std::vector<int>& dims) {
  require(!dims.empty(), "sector_weights: empty dimension list");
  const long dim = index_product(dims);
  require(rho.rows() == dim && rho.cols() == dim,
          "sector_weights: dimensions do not multiply to the matrix size");
  long nstr = 1;
  for (int d : dims) {
    nstr *= long(d) * d;
    require(nstr <= (1L << 22), "sector_weights: operator basis too large");
  }
  require(hs_norm(Mat(rho - rho.adjoint())) < 1e-9 * std::max(1.0, hs_norm(rho)),
          "sector_weights: matrix is not Hermitian");

  const int n = int(dims.size());
  const auto st = strides_of(dims);

  // coefficient tensor C[e_0, ..., e_{n-1}] with e_i = y_i * d_i + x_i,
  // seeded from rho(Y, X); each site is then rotated into (identity, T_a)
  // components, leaving C[string] = tr(rho * B_string).
  std::vector<int> edims(n);
  for (int i = 0; i < n; ++i) edims[i] = dims[i] * dims[i];
  const auto est = strides_of(edims);
  std::vector<cd> C(nstr, cd(0, 0));
  for (long X = 0; X < dim; ++X)
    for (long Y = 0; Y < dim; ++Y) {
      long e = 0;
      for (int i = 0; i < n; ++i) {
        int x = int((X / st[i]) % dims[i]);
        int y = int((Y / st[i]) % dims[i]);
        e += long(y * dims[i] + x) * est[i];
      }
      C[e] = rho(Y, X);
    }

  std::vector<cd> scratch;
  for (int i = 0; i < n; ++i) {
    const int d = dims[i];
    auto basis = traceless_basis(d);
    Mat Q = Mat::Zero(d * d, d * d);  // row a, column e = y*d + x
    for (int y = 0; y < d; ++y) Q(0, y * d + y) = 1.0;  // identity component
    for (size_t a = 0; a < basis.size(); ++a)
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) Q(long(a) + 1, y * d + x) = basis[a](x, y);
    apply_site(C, edims, i, Q, scratch);
  }

  SectorDecomposition out;
  for (long e = 0; e < nstr; ++e) {
    int support = 0;
    double bnorm2 = 1.0;
    int single = -1;
    std::pair<int, int> pair{-1, -1};
    for (int i = 0; i < n; ++i) {
      int a = int((e / est[i]) % edims[i]);
      if (a == 0) {
        bnorm2 *= dims[i];
      } else {
        bnorm2 *= 2.0;
        ++support;
        if (support == 1) single = i;
        if (support == 2) pair = {single, i};
      }
    }
    double w = std::norm(C[e]) / bnorm2;
    if (support == 0) {
      out.identity_weight += w;
    } else {
      out.weights[support] += w;
      if (support == 1) out.single_site[single] += w;
      if (support == 2) out.two_site[pair] += w;
    }
  }
  return out;
}

InvarianceResult check_u1_invariance(const std::vector<cd>& state,
                                     const GeneratorSpec& gen) {
  const double nn = vec_norm(state);
  require(nn > 1e-12, "check_u1_invariance: zero state");
  auto ns = gen.apply(state);

  cd num(0, 0);
  for (size_t i = 0; i < state.size(); ++i) num += std::conj(state[i]) * ns[i];
  InvarianceResult r;
  r.c = std::real(num) / (nn * nn);
  double dev = 0;
  for (size_t i = 0; i < state.size(); ++i) dev += std::norm(ns[i] - r.c * state[i]);
  r.residual = std::sqrt(dev) / nn;
  r.invariant = r.residual <= 1e-9;
  return r;
}

double two_uniform_deviation(const std::vector<cd>& state,
                             const std::vector<int>& dims) {
  const long dim = index_product(dims);
  require(long(state.size()) == dim, "two_uniform_deviation: dimension mismatch");
  const int n = int(dims.size());
  require(n >= 2, "two_uniform_deviation: need at least two parties");
  double total = 0;
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      Mat rho = reduced_on(state, dims, {k, l});
      const long d = rho.rows();
      Mat diff = rho - Mat::Identity(d, d) / double(d);
      total += std::real((diff.adjoint() * diff).trace());
    }
  return total;
}

double lemma_marginal_witness(const std::vector<cd>& state,
                              const std::vector<int>& dims, int k) {
  const long dim = index_product(dims);
  require(long(state.size()) == dim, "lemma_marginal_witness: dimension mismatch");
  const int n = int(dims.size());
  require(k >= 0 && k < n, "lemma_marginal_witness: party out of range");
  double worst = 0;
  for (int l = 0; l < n; ++l) {
    if (l == k) continue;
    std::vector<int> keep = {std::min(k, l), std::max(k, l)};
    Mat rho = reduced_on(state, dims, keep);
    const int dk = dims[keep[0]], dl = dims[keep[1]];
    // trace out the other party of the pair to get rho_l
    Mat rl = Mat::Zero(l == keep[0] ? dk : dl, l == keep[0] ? dk : dl);
    for (int a = 0; a < (l == keep[0] ? dk : dl); ++a)
      for (int b = 0; b < (l == keep[0] ? dk : dl); ++b) {
        cd acc(0, 0);
        for (int t = 0; t < (l == keep[0] ? dl : dk); ++t) {
          // site keep[0] varies fastest inside the pair marginal
          long ia = (l == keep[0]) ? (a + long(t) * dk) : (t + long(a) * dk);
          long ib = (l == keep[0]) ? (b + long(t) * dk) : (t + long(b) * dk);
          acc += rho(ia, ib);
        }
        rl(a, b) = acc;
      }
    // target: maximally mixed at party k, arbitrary rho_l at party l
    const int dkk = dims[k];
    Mat target = Mat::Zero(rho.rows(), rho.cols());
    for (long A = 0; A < rho.rows(); ++A)
      for (long B = 0; B < rho.cols(); ++B) {
        int a0 = int(A % dk), a1 = int(A / dk);
        int b0 = int(B % dk), b1 = int(B / dk);
        int ka = (k == keep[0]) ? a0 : a1, kb = (k == keep[0]) ? b0 : b1;
        int la = (k == keep[0]) ? a1 : a0, lb = (k == keep[0]) ? b1 : b0;
        if (ka == kb) target(A, B) = rl(la, lb) / double(dkk);
      }
    worst = std::max(worst, hs_norm(Mat(rho - target)));
  }
  return worst;
}

TwoUniformResult min_two_uniform_deviation(int n, const std::vector<int>& dims,
                                           Symmetry sym,
                                           const TwoUniformOptions& opts) {
  require(n >= 4, "min_two_uniform_deviation: needs at least four parties");
  require(int(dims.size()) == n, "min_two_uniform_deviation: dims size mismatch");
  const long dim = index_product(dims);
  require(dim <= (1L << 12), "min_two_uniform_deviation: dimension overflow");

  // orthonormal basis of the symmetric subspace, one block per candidate
  std::vector<Mat> blocks;
  if (sym == Symmetry::su2) {
    for (int d : dims) require(d == 2, "SU(2) subspace search supports qubit parties");
    Mat basis = su2::invariant_basis(n);
    require(basis.cols() > 0, "no invariant states at this party count");
    blocks.push_back(basis);
  } else if (sym == Symmetry::u1) {
    require(!opts.gen.parties.empty(), "u1 symmetry needs a generator");
    require(opts.gen.dims() == dims, "generator dimensions disagree");
    Mat nh = Mat::Zero(dim, dim);
    std::vector<cd> col(dim);
    for (long j = 0; j < dim; ++j) {
      std::fill(col.begin(), col.end(), cd(0, 0));
      col[j] = 1.0;
      auto nj = opts.gen.apply(col);
      for (long i = 0; i < dim; ++i) nh(i, j) = nj[i];
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(nh);
    long start = 0;
    while (start < dim) {
      long stop = start + 1;
      while (stop < dim &&
             es.eigenvalues()(stop) - es.eigenvalues()(start) < 1e-9)
        ++stop;
      blocks.push_back(es.eigenvectors().middleCols(start, stop - start));
      start = stop;
    }
  } else {
    blocks.push_back(Mat::Identity(dim, dim));
  }

  TwoUniformResult best;
  best.min_deviation = -1;
  auto consider = [&](const std::vector<cd>& psi, double dev) {
    if (best.min_deviation < 0 || dev < best.min_deviation) {
      best.min_deviation = dev;
      best.argmin = psi;
    }
  };

  double best_witness = -1;
  for (const Mat& basis : blocks) {
    const int m = int(basis.cols());
    auto dev_of = [&](const Eigen::VectorXd& x) {
      return two_uniform_deviation(subspace_state(basis, x), dims);
    };
    auto wit_of = [&](const Eigen::VectorXd& x) {
      return lemma_marginal_witness(subspace_state(basis, x), dims, 0);
    };

    if (m == 1) {
      Eigen::VectorXd x(2);
      x << 1, 0;
      consider(subspace_state(basis, x), dev_of(x));
      best_witness = best_witness < 0 ? wit_of(x) : std::min(best_witness, wit_of(x));
      continue;
    }

    if (m == 2) {
      // exhaustive projective grid (theta, phi), then local refinement
      const int G = std::max(8, opts.grid);
      Eigen::VectorXd dbest(4), wbest(4);
      double dmin = -1, wmin = -1;
      for (int ti = 0; ti <= G; ++ti)
        for (int fi = 0; fi < G; ++fi) {
          double t = (M_PI / 2) * ti / G, ph = 2 * M_PI * fi / G;
          Eigen::VectorXd x(4);
          x << std::cos(t), 0, std::sin(t) * std::cos(ph), std::sin(t) * std::sin(ph);
          double d = dev_of(x), w = wit_of(x);
          if (dmin < 0 || d < dmin) dmin = d, dbest = x;
          if (wmin < 0 || w < wmin) wmin = w, wbest = x;
        }
      dmin = nelder_mead(dev_of, dbest, 0.05, 400);
      wmin = nelder_mead(wit_of, wbest, 0.05, 400);
      consider(subspace_state(basis, dbest), dmin);
      best_witness = best_witness < 0 ? wmin : std::min(best_witness, wmin);
      continue;
    }

    // multistart simplex descent, reduced by (value, start index)
    std::vector<double> dval(opts.starts), wval(opts.starts);
    std::vector<Eigen::VectorXd> dargs(opts.starts);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < opts.starts; ++s) {
      std::mt19937_64 rng(opts.seed + s);
      std::normal_distribution<double> gauss;
      Eigen::VectorXd x(2 * m);
      for (int i = 0; i < 2 * m; ++i) x(i) = gauss(rng);
      x /= x.norm();
      Eigen::VectorXd xd = x;
      dval[s] = nelder_mead(dev_of, xd, 0.25, 250 * m);
      dargs[s] = xd;
      Eigen::VectorXd xw = x;
      wval[s] = nelder_mead(wit_of, xw, 0.25, 250 * m);
    }
    for (int s = 0; s < opts.starts; ++s) {
      consider(subspace_state(basis, dargs[s]), dval[s]);
      best_witness = best_witness < 0 ? wval[s] : std::min(best_witness, wval[s]);
    }
  }
  best.witness = best_witness;
  return best;
}

CodeLegReport check_evenbly_code(const tn::DenseTensor& tensor, int logical_leg) {
  const int q = int(tensor.legs.size());
  require(q >= 2, "check_evenbly_code: need a logical and a physical leg");
  require(logical_leg >= 0 && logical_leg < q, "logical leg out of range");
  const int total = tensor.total_slots();
  require(total <= 10, "check_evenbly_code: tensor too large");

  std::vector<cd> psi = tensor.data;
  const double nn = vec_norm(psi);
  require(nn > 1e-12, "check_evenbly_code: zero tensor");
  for (cd& x : psi) x /= nn;

  // parties are legs; slot s of leg i sits at offset(i) + s
  std::vector<int> dims, offset(q);
  int off = 0;
  for (int i = 0; i < q; ++i) {
    offset[i] = off;
    off += tensor.legs[i].k;
    dims.push_back(1 << tensor.legs[i].k);
  }

  CodeLegReport rep;
  rep.worst_marginal = 0;
  for (int j = 0; j < q; ++j) {
    if (j == logical_leg) continue;
    std::vector<int> keep = {std::min(logical_leg, j), std::max(logical_leg, j)};
    Mat rho = reduced_on(psi, dims, keep);
    const long d = rho.rows();
    rep.worst_marginal = std::max(
        rep.worst_marginal, hs_norm(Mat(rho - Mat::Identity(d, d) / double(d))));
  }
  rep.marginals_uniform = rep.worst_marginal <= 1e-9;

  auto gen = su2::total_spin_generators(total);
  Eigen::Map<const Eigen::VectorXcd> v(psi.data(), long(psi.size()));
  rep.invariance_residual = std::max({(gen.Jx * v).norm(), (gen.Jy * v).norm(),
                                      (gen.Jz * v).norm()});
  rep.su2_invariant = rep.invariance_residual <= 1e-9;
  return rep;
}

int count_mm_balanced_bipartitions(const std::vector<cd>& state,
                                   const std::vector<int>& dims) {
  const int parties = int(dims.size());
  require(parties >= 2 && parties % 2 == 0,
          "count_mm_balanced_bipartitions: party count must be even");
  const long dim = index_product(dims);
  require(long(state.size()) == dim, "count_mm_balanced_bipartitions: size mismatch");
  require(dim <= (1L << 12), "count_mm_balanced_bipartitions: dimension overflow");

  const int half = parties / 2;
  int count = 0;
  // fix party 0 in the first part so complements are counted once
  std::vector<int> pick(half);
  std::function<void(int, int)> rec = [&](int next, int chosen) {
    if (chosen == half) {
      std::vector<int> keep(pick.begin(), pick.end());
      Mat rho = reduced_on(state, dims, keep);
      const long d = rho.rows();
      if (hs_norm(Mat(rho - Mat::Identity(d, d) / double(d))) <= 1e-9) ++count;
      return;
    }
    if (parties - next < half - chosen) return;
    for (int p = next; p < parties; ++p) {
      pick[chosen] = p;
      rec(p + 1, chosen + 1);
    }
  };
  pick[0] = 0;
  rec(1, 1);
  return count;
}

double geometric_measure_pairing(const tn::PairingState& state, int d) {
  require(d >= 2, "geometric_measure_pairing: local dimension must be at least 2");
  require(state.perms.empty(),
          "geometric_measure_pairing: state must be a pure pair collection");
  require(state.is_perfect_matching(),
          "geometric_measure_pairing: every slot must belong to one pair");
  const int m = int(state.pairs.size());
  return 1.0 - std::pow(double(d), -m);
}

double geometric_measure_dense(const std::vector<cd>& state,
                               const std::vector<int>& dims, int starts,
                               std::uint64_t seed) {
  const long dim = index_product(dims);
  require(long(state.size()) == dim, "geometric_measure_dense: size mismatch");
  require(dim <= (1L << 12), "geometric_measure_dense: dimension overflow");
  require(starts >= 1, "geometric_measure_dense: needs at least one start");
  const int n = int(dims.size());
  const auto st = strides_of(dims);
  const double nn = vec_norm(state);
  require(nn > 1e-12, "geometric_measure_dense: zero state");

  double best = 0;
  for (int s = 0; s < starts; ++s) {
    std::mt19937_64 rng(seed + s);
    std::normal_distribution<double> gauss;
    std::vector<std::vector<cd>> v(n);
    for (int i = 0; i < n; ++i) {
      v[i].resize(dims[i]);
      double vn = 0;
      for (cd& x : v[i]) {
        x = cd(gauss(rng), gauss(rng));
        vn += std::norm(x);
      }
      for (cd& x : v[i]) x /= std::sqrt(vn);
    }

    double lam = 0;
    for (int sweep = 0; sweep < 500; ++sweep) {
      for (int i = 0; i < n; ++i) {
        // g[x] = sum over the other sites of conj(v_j) psi
        std::vector<cd> g(dims[i], cd(0, 0));
        for (long X = 0; X < dim; ++X) {
          cd w = state[X];
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            w *= std::conj(v[j][(X / st[j]) % dims[j]]);
          }
          g[(X / st[i]) % dims[i]] += w;
        }
        double gn = 0;
        for (const cd& x : g) gn += std::norm(x);
        gn = std::sqrt(gn);
        if (gn < 1e-15) break;
        for (int x = 0; x < dims[i]; ++x) v[i][x] = g[x] / gn;
      }
      cd overlap(0, 0);
      for (long X = 0; X < dim; ++X) {
        cd w = state[X];
        for (int j = 0; j < n; ++j) w *= std::conj(v[j][(X / st[j]) % dims[j]]);
        overlap += w;
      }
      double next = std::norm(overlap) / (nn * nn);
      if (std::abs(next - lam) < 1e-14) {
        lam = next;
        break;
      }
      lam = next;
    }
    best = std::max(best, lam);
  }
  return 1.0 - best;
}

std::vector<cd> qudit_singlet(int d) {
  require(d >= 2, "qudit_singlet: dimension must be at least 2");
  std::vector<cd> psi(long(d) * d, cd(0, 0));
  for (int i = 0; i < d; ++i)
    psi[i + long(d) * (d - 1 - i)] = ((i % 2) ? -1.0 : 1.0) / std::sqrt(double(d));
  return psi;
}

std::vector<cd> cycle_graph_state(int n) {
  require(n >= 3, "cycle_graph_state: need at least three qubits");
  require(n <= 20, "cycle_graph_state: too many qubits");
  const long dim = 1L << n;
  std::vector<cd> psi(dim);
  const double amp = 1.0 / std::sqrt(double(dim));
  for (long x = 0; x < dim; ++x) {
    int sign = 0;
    for (int i = 0; i < n; ++i) sign += int((x >> i) & 1) * int((x >> ((i + 1) % n)) & 1);
    psi[x] = (sign % 2 ? -amp : amp);
  }
  return psi;
}

std::vector<cd> random_invariant_state(int n_qubits, std::mt19937_64& rng) {
  Mat basis = su2::invariant_basis(n_qubits);
  require(basis.cols() > 0, "random_invariant_state: no invariant states");
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd coeff(basis.cols());
  for (int i = 0; i < basis.cols(); ++i) coeff(i) = cd(gauss(rng), gauss(rng));
  coeff /= coeff.norm();
  Eigen::VectorXcd psi = basis * coeff;
  return {psi.data(), psi.data() + psi.size()};
}

}  // namespace hitlab::nogo
