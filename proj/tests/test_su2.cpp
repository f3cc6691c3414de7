#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hitlab/su2.hpp"

using namespace hitlab;
using namespace hitlab::su2;

TEST_CASE("epsilon pair tensor") {
  Mat2 e = epsilon();
  CHECK(e(0, 1) == cd(0, 1));
  CHECK(e(1, 0) == cd(0, -1));
  CHECK(e(0, 0) == cd(0, 0));
  CHECK(e(1, 1) == cd(0, 0));
  // antisymmetry
  CHECK((e.transpose() + e).norm() == doctest::Approx(0.0));
  // closed loop of one arc against its transposed partner evaluates to -2
  CHECK(std::abs((e * e.transpose()).trace() - cd(-2, 0)) < 1e-15);
}

TEST_CASE("binor crossing identity") {
  // -(i eps)_{ab} (i eps)_{cd} = delta_ac delta_bd - delta_ad delta_bc
  Mat2 e = epsilon();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          cd lhs = -e(a, b) * e(c, d);
          cd rhs = cd((a == c && b == d) ? 1 : 0, 0) - cd((a == d && b == c) ? 1 : 0, 0);
          CHECK(std::abs(lhs - rhs) < 1e-15);
        }
}

TEST_CASE("symmetrizer basics") {
  CHECK((symmetrizer(1) - Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));
  Mat s2 = symmetrizer(2);
  CHECK(std::abs(s2.trace() - cd(3, 0)) < 1e-12);
  CHECK((s2 * s2 - s2).norm() < 1e-12);
  Mat s3 = symmetrizer(3);
  CHECK(std::abs(s3.trace() - cd(4, 0)) < 1e-12);
  // n=3 symmetrizer equals the j=3/2 projector from the recursive build
  auto set = spin_projectors(3);
  CHECK((s3 - set.proj(3)).norm() < 1e-12);
}

TEST_CASE("irrep multiplicities") {
  auto m2 = irrep_multiplicities(2);
  CHECK(m2[0] == 1);
  CHECK(m2[2] == 1);
  auto m4 = irrep_multiplicities(4);
  CHECK(m4[0] == 2);
  CHECK(m4[2] == 3);
  CHECK(m4[4] == 1);
  auto m6 = irrep_multiplicities(6);
  CHECK(m6[0] == 5);
  CHECK(m6[2] == 9);
  CHECK(m6[4] == 5);
  CHECK(m6[6] == 1);
}

TEST_CASE("multiplicities against Casimir spectrum oracle at k=4") {
  // oracle: diagonalize J^2 on (C^2)^(x4); degeneracy of j(j+1) is m_j (2j+1)
  Mat c = casimir(4);
  Eigen::SelfAdjointEigenSolver<Mat> es(c);
  int deg0 = 0, deg1 = 0, deg2 = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    if (std::abs(ev - 0.0) < 1e-9) ++deg0;
    else if (std::abs(ev - 2.0) < 1e-9) ++deg1;
    else if (std::abs(ev - 6.0) < 1e-9) ++deg2;
    else CHECK(false);
  }
  CHECK(deg0 == 2 * 1);
  CHECK(deg1 == 3 * 3);
  CHECK(deg2 == 1 * 5);
}

TEST_CASE("spin projector suite k <= 8") {
  for (int k = 1; k <= 8; ++k) {
    auto set = spin_projectors(k);
    auto mults = irrep_multiplicities(k);
    const long dim = 1L << k;
    Mat sum = Mat::Zero(dim, dim);
    CHECK(set.entries.size() == mults.size());
    for (const auto& e : set.entries) {
      CHECK(mults.at(e.twice_j) == e.multiplicity);
      // idempotent
      CHECK((e.P * e.P - e.P).norm() < 1e-9);
      // hermitian
      CHECK((e.P - e.P.adjoint()).norm() < 1e-9);
      // trace = multiplicity * (2j+1)
      CHECK(std::abs(e.P.trace() - cd(e.multiplicity * (e.twice_j + 1), 0)) < 1e-9);
      for (const auto& f : set.entries) {
        if (f.twice_j == e.twice_j) continue;
        CHECK((e.P * f.P).norm() < 1e-9);
      }
      sum += e.P;
    }
    CHECK((sum - Mat::Identity(dim, dim)).norm() < 1e-9);
  }
}

TEST_CASE("generators: algebra, Casimir decomposition, covariance") {
  for (int k = 1; k <= 6; ++k) {
    auto g = total_spin_generators(k);
    CHECK((g.Jx * g.Jy - g.Jy * g.Jx - cd(0, 1) * g.Jz).norm() < 1e-9);
    CHECK((g.Jy * g.Jz - g.Jz * g.Jy - cd(0, 1) * g.Jx).norm() < 1e-9);
    CHECK((g.Jz * g.Jx - g.Jx * g.Jz - cd(0, 1) * g.Jy).norm() < 1e-9);
    CHECK((g.Jx - g.Jx.adjoint()).norm() < 1e-12);
    CHECK(std::abs(g.Jz.trace()) < 1e-12);

    auto set = spin_projectors(k);
    const long dim = 1L << k;
    Mat c2 = Mat::Zero(dim, dim);
    for (const auto& e : set.entries) {
      double j = e.twice_j / 2.0;
      c2 += j * (j + 1) * e.P;
    }
    CHECK((c2 - casimir(k)).norm() < 1e-9);
  }

  // covariance: conjugating by g^(xk) fixes every projector
  std::mt19937_64 rng(20240817);
  for (int k = 2; k <= 4; ++k) {
    Mat2 u = random_su2(rng);
    Mat big = Mat::Identity(1, 1);
    for (int s = 0; s < k; ++s) {
      Mat next(big.rows() * 2, big.cols() * 2);
      next.block(0, 0, big.rows(), big.cols()) = u(0, 0) * big;
      next.block(0, big.cols(), big.rows(), big.cols()) = u(0, 1) * big;
      next.block(big.rows(), 0, big.rows(), big.cols()) = u(1, 0) * big;
      next.block(big.rows(), big.cols(), big.rows(), big.cols()) = u(1, 1) * big;
      big = next;
    }
    auto set = spin_projectors(k);
    for (const auto& e : set.entries)
      CHECK((big * e.P * big.adjoint() - e.P).norm() < 1e-9);
  }
}

TEST_CASE("k=2 projectors match the drawn forms") {
  auto set = spin_projectors(2);
  // singlet projector = (1/4) cupcap with i*eps arcs... the true projector is
  // (1/2)|eps><eps|; check against that closed form and the prefactor table
  Vec eps = epsilon_state();
  Mat p0_expected = 0.5 * eps * eps.adjoint();
  CHECK((set.proj(0) - p0_expected).norm() < 1e-12);
  CHECK((set.proj(2) - symmetrizer(2)).norm() < 1e-12);
}

TEST_CASE("diagram normalization prefactors") {
  auto k2 = diagram_prefactors(2);
  REQUIRE(k2.size() == 2);
  CHECK(k2[0] == doctest::Approx(1.0 / 4.0).epsilon(1e-12));
  CHECK(k2[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  auto k3 = diagram_prefactors(3);
  REQUIRE(k3.size() == 3);
  CHECK(k3[0] == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
  CHECK(k3[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(k3[2] == doctest::Approx(1.0 / 4.0).epsilon(1e-12));
}

TEST_CASE("invariant subspace bases") {
  Mat b4 = invariant_basis(4);
  CHECK(b4.cols() == 2);
  CHECK((b4.adjoint() * b4 - Mat::Identity(2, 2)).norm() < 1e-9);
  Mat c4 = casimir(4);
  CHECK((c4 * b4).norm() < 1e-9);
  Mat b6 = invariant_basis(6);
  CHECK(b6.cols() == 5);
  CHECK((b6.adjoint() * b6 - Mat::Identity(5, 5)).norm() < 1e-9);
  CHECK((casimir(6) * b6).norm() < 1e-9);
}

TEST_CASE("irrep spin matrices") {
  auto [jx, jy, jz] = spin_matrices(3);  // j = 3/2
  CHECK((jx * jy - jy * jx - cd(0, 1) * jz).norm() < 1e-12);
  Mat c2 = jx * jx + jy * jy + jz * jz;
  CHECK((c2 - (15.0 / 4.0) * Mat::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("random SU(2) elements are special unitary") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    Mat2 u = random_su2(rng);
    CHECK((u * u.adjoint() - Mat2::Identity()).norm() < 1e-12);
    CHECK(std::abs(u.determinant() - cd(1, 0)) < 1e-12);
  }
}
