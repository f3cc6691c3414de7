#include "hitlab/su2.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hitlab::su2 {

Mat2 epsilon() {
  Mat2 e = Mat2::Zero();
  e(0, 1) = cd(0, 1);
  e(1, 0) = cd(0, -1);
  return e;
}

Vec epsilon_state() {
  Vec v = Vec::Zero(4);
  // index = slot0 + 2*slot1; entry (a,b) of i*eps lands at a + 2b
  Mat2 e = epsilon();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) v(a + 2 * b) = e(a, b);
  return v;
}

Mat symmetrizer(int n) {
  require(n >= 1, "symmetrizer: n must be >= 1");
  const int dim = 1 << n;
  Mat s = Mat::Zero(dim, dim);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  long count = 0;
  do {
    // permutation matrix: basis bit s of the source moves to bit perm[s]
    for (int idx = 0; idx < dim; ++idx) {
      int out = 0;
      for (int b = 0; b < n; ++b)
        if (idx & (1 << b)) out |= 1 << perm[b];
      s(out, idx) += 1.0;
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s / double(count);
}

Mat embed(const Mat& op, const std::vector<int>& slots, int k) {
  const int m = int(slots.size());
  require(op.rows() == (1 << m) && op.cols() == (1 << m), "embed: operator dimension mismatch");
  const long dim = 1L << k;
  int rest_mask = int(dim - 1);
  for (int s : slots) {
    require(s >= 0 && s < k, "embed: slot out of range");
    rest_mask &= ~(1 << s);
  }
  Mat out = Mat::Zero(dim, dim);
  for (long col = 0; col < dim; ++col) {
    int sub_in = 0;
    for (int i = 0; i < m; ++i)
      if (col & (1L << slots[i])) sub_in |= 1 << i;
    const long rest = col & rest_mask;
    for (int sub_out = 0; sub_out < (1 << m); ++sub_out) {
      const cd v = op(sub_out, sub_in);
      if (v == cd(0, 0)) continue;
      long row = rest;
      for (int i = 0; i < m; ++i)
        if (sub_out & (1 << i)) row |= 1L << slots[i];
      out(row, col) += v;
    }
  }
  return out;
}

const Mat& SpinProjectorSet::proj(int twice_j) const {
  for (const auto& e : entries)
    if (e.twice_j == twice_j) return e.P;
  throw ValidationError("spin projector: no such j");
}

bool SpinProjectorSet::has(int twice_j) const {
  for (const auto& e : entries)
    if (e.twice_j == twice_j) return true;
  return false;
}

namespace {

struct Branch {
  int twice_j;
  Mat W;  // isometry: 2^k x (twice_j+1), orthonormal columns
};

// Clebsch-Gordan coupling of a spin-J branch with one more qubit.
// Qubit basis: |0> = m_s = +1/2, |1> = m_s = -1/2; new slot is the high bit.
std::vector<Branch> couple_qubit(const std::vector<Branch>& prev, int k_new) {
  std::vector<Branch> next;
  const long dim_prev = 1L << (k_new - 1);
  const long dim_new = 1L << k_new;
  for (const auto& br : prev) {
    const int J = br.twice_j;
    // up branch: J' = J + 1
    {
      const int Jp = J + 1;
      Mat W = Mat::Zero(dim_new, Jp + 1);
      for (int c = 0; c <= Jp; ++c) {
        const int M = -Jp + 2 * c;  // twice the magnetic number
        const double ca = std::sqrt(double(J + M + 1) / double(2 * (J + 1)));
        const double cb = std::sqrt(double(J - M + 1) / double(2 * (J + 1)));
        if (ca != 0.0 && std::abs(M - 1) <= J) {
          const int col_prev = (M - 1 + J) / 2;
          W.block(0, c, dim_prev, 1) += ca * br.W.col(col_prev);  // qubit |0>
        }
        if (cb != 0.0 && std::abs(M + 1) <= J) {
          const int col_prev = (M + 1 + J) / 2;
          W.block(dim_prev, c, dim_prev, 1) += cb * br.W.col(col_prev);  // qubit |1>
        }
      }
      next.push_back({Jp, std::move(W)});
    }
    // down branch: J' = J - 1 (absent for J = 0)
    if (J >= 1) {
      const int Jm = J - 1;
      Mat W = Mat::Zero(dim_new, Jm + 1);
      for (int c = 0; c <= Jm; ++c) {
        const int M = -Jm + 2 * c;
        const double ca = -std::sqrt(double(J - M + 1) / double(2 * (J + 1)));
        const double cb = std::sqrt(double(J + M + 1) / double(2 * (J + 1)));
        if (std::abs(M - 1) <= J) {
          const int col_prev = (M - 1 + J) / 2;
          W.block(0, c, dim_prev, 1) += ca * br.W.col(col_prev);
        }
        if (std::abs(M + 1) <= J) {
          const int col_prev = (M + 1 + J) / 2;
          W.block(dim_prev, c, dim_prev, 1) += cb * br.W.col(col_prev);
        }
      }
      next.push_back({Jm, std::move(W)});
    }
  }
  return next;
}

}  // namespace

SpinProjectorSet spin_projectors(int k) {
  require(k >= 1, "spin_projectors: k must be >= 1");
  // seed branch: column c is |J = 1/2, M = -1/2 + c>, and |1> carries m = -1/2
  Mat seed = Mat::Zero(2, 2);
  seed(1, 0) = 1.0;
  seed(0, 1) = 1.0;
  std::vector<Branch> branches{{1, seed}};
  for (int step = 2; step <= k; ++step) branches = couple_qubit(branches, step);

  std::map<int, ProjectorEntry> by_j;
  const long dim = 1L << k;
  for (const auto& br : branches) {
    auto& entry = by_j[br.twice_j];
    if (entry.P.size() == 0) {
      entry.twice_j = br.twice_j;
      entry.P = Mat::Zero(dim, dim);
    }
    entry.P += br.W * br.W.adjoint();
    entry.multiplicity += 1;
  }
  SpinProjectorSet set;
  set.k = k;
  for (auto& [j, e] : by_j) set.entries.push_back(std::move(e));
  return set;
}

std::map<int, int> irrep_multiplicities(int k) {
  require(k >= 1, "irrep_multiplicities: k must be >= 1");
  std::map<int, int> m{{1, 1}};
  for (int step = 2; step <= k; ++step) {
    std::map<int, int> next;
    for (const auto& [J, c] : m) {
      next[J + 1] += c;
      if (J >= 1) next[J - 1] += c;
    }
    m = std::move(next);
  }
  return m;
}

GeneratorTriple total_spin_generators(int k) {
  require(k >= 1, "total_spin_generators: k must be >= 1");
  Mat2 sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, cd(0, -1), cd(0, 1), 0;
  sz << 1, 0, 0, -1;
  const long dim = 1L << k;
  GeneratorTriple g;
  g.k = k;
  g.Jx = Mat::Zero(dim, dim);
  g.Jy = Mat::Zero(dim, dim);
  g.Jz = Mat::Zero(dim, dim);
  for (int s = 0; s < k; ++s) {
    g.Jx += embed(0.5 * sx, {s}, k);
    g.Jy += embed(0.5 * sy, {s}, k);
    g.Jz += embed(0.5 * sz, {s}, k);
  }
  return g;
}

Mat casimir(int k) {
  auto g = total_spin_generators(k);
  return g.Jx * g.Jx + g.Jy * g.Jy + g.Jz * g.Jz;
}

std::vector<double> diagram_prefactors(int k) {
  require(k == 2 || k == 3, "diagram_prefactors: drawn diagrams exist for k = 2, 3 only");
  auto hs2 = [](const Mat& d) { return d.squaredNorm(); };
  const Vec eps = epsilon_state();
  const Mat cupcap = eps * eps.transpose();  // bilinear outer product, not adjoint
  std::vector<double> out;
  if (k == 2) {
    out.push_back(1.0 / hs2(cupcap));
    out.push_back(1.0 / hs2(symmetrizer(2)));
  } else {
    const Mat i2 = Mat::Identity(2, 2);
    out.push_back(1.0 / hs2(embed(cupcap, {0, 1}, 3)));
    const Mat arc = embed(symmetrizer(2), {0, 1}, 3) * embed(cupcap, {1, 2}, 3);
    out.push_back(1.0 / hs2(arc));
    out.push_back(1.0 / hs2(symmetrizer(3)));
    (void)i2;
  }
  return out;
}

Mat invariant_basis(int k) {
  auto mults = irrep_multiplicities(k);
  const int m0 = mults.count(0) ? mults[0] : 0;
  require(m0 > 0, "invariant_basis: no singlet sector for odd k");
  const auto set = spin_projectors(k);
  const Mat& p0 = set.proj(0);
  Eigen::SelfAdjointEigenSolver<Mat> es(p0);
  const long dim = p0.rows();
  Mat basis(dim, m0);
  int col = 0;
  for (long i = 0; i < dim; ++i) {
    if (es.eigenvalues()(i) > 0.5) {
      require(col < m0, "invariant_basis: rank exceeds multiplicity");
      basis.col(col++) = es.eigenvectors().col(i);
    }
  }
  require(col == m0, "invariant_basis: rank does not match multiplicity");
  return basis;
}

std::array<Mat, 3> spin_matrices(int twice_j) {
  require(twice_j >= 0, "spin_matrices: negative spin");
  const int d = twice_j + 1;
  const double j = twice_j / 2.0;
  Mat jp = Mat::Zero(d, d), jz = Mat::Zero(d, d);
  for (int c = 0; c < d; ++c) {
    const double m = -j + c;
    jz(c, c) = m;
    if (c + 1 < d) jp(c + 1, c) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Mat jm = jp.adjoint();
  Mat jx = 0.5 * (jp + jm);
  Mat jy = cd(0, -0.5) * (jp - jm);
  return {jx, jy, jz};
}

Mat2 random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double a, b, c, d, norm;
  do {
    a = n(rng);
    b = n(rng);
    c = n(rng);
    d = n(rng);
    norm = std::sqrt(a * a + b * b + c * c + d * d);
  } while (norm < 1e-12);
  a /= norm;
  b /= norm;
  c /= norm;
  d /= norm;
  Mat2 u;
  u << cd(a, b), cd(c, d), cd(-c, d), cd(a, -b);
  return u;
}

Mat GeneratorSpec::site_op(int i) const {
  require(i >= 0 && i < parties(), "GeneratorSpec: party out of range");
  const long d = local_dim();
  Mat op = alpha[i] * Mat::Identity(d, d);
  require(beta.size() == alpha.size(), "GeneratorSpec: beta row count mismatch");
  require(beta[i].size() == basis.size(), "GeneratorSpec: beta/basis length mismatch");
  for (size_t a = 0; a < basis.size(); ++a) {
    require(basis[a].rows() == d && basis[a].cols() == d,
            "GeneratorSpec: basis dimension mismatch");
    op += beta[i][a] * basis[a];
  }
  return op;
}

GeneratorSpec spin_component_generator(int parties, int k, int axis) {
  require(parties >= 1 && k >= 1 && axis >= 0 && axis < 3,
          "spin_component_generator: bad arguments");
  GeneratorTriple g = total_spin_generators(k);
  GeneratorSpec spec;
  spec.alpha.assign(parties, 0.0);
  spec.basis = {g.Jx, g.Jy, g.Jz};
  std::vector<double> row(3, 0.0);
  row[axis] = 1.0;
  spec.beta.assign(parties, row);
  return spec;
}

GeneratorSpec number_generator(const std::vector<double>& alpha) {
  require(!alpha.empty(), "number_generator: no parties");
  GeneratorSpec spec;
  Mat sz = Mat::Zero(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  spec.basis = {sz};
  for (double a : alpha) {
    // n = (1 - sigma_z) / 2 counts |1> occupation
    spec.alpha.push_back(a / 2.0);
    spec.beta.push_back({-a / 2.0});
  }
  return spec;
}

}  // namespace hitlab::su2
