// Dense contraction kernels against the serial reference, reduced densities
// and entropies against hand-computed states, and the pairing representation
// against its own dense expansion.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hitlab/su2.hpp"
#include "hitlab/tensor.hpp"

using namespace hitlab;
using namespace hitlab::tn;

namespace {

DenseTensor random_tensor(std::vector<Leg> legs, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  DenseTensor t;
  t.legs = std::move(legs);
  t.data.resize(t.dim());
  for (auto& v : t.data) v = cd(g(rng), g(rng));
  return t;
}

DenseTensor eps_tensor(int id0, bool out0, int id1, bool out1) {
  Vec e = su2::epsilon_state();
  return make_state({{id0, 1, out0}, {id1, 1, out1}},
                    {e(0), e(1), e(2), e(3)});
}

double rel_diff(const DenseTensor& a, const DenseTensor& b) {
  REQUIRE(a.data.size() == b.data.size());
  double num = 0, den = 0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    num += std::norm(a.data[i] - b.data[i]);
    den += std::norm(a.data[i]) + std::norm(b.data[i]);
  }
  return den == 0 ? 0.0 : std::sqrt(num / den);
}

}  // namespace

TEST_CASE("tensor bookkeeping") {
  DenseTensor t = make_state({{3, 2, true}, {7, 1, false}}, std::vector<cd>(8, cd(0.5, 0)));
  CHECK(t.total_slots() == 3);
  CHECK(t.dim() == 8);
  CHECK(t.leg_pos(7) == 1);
  CHECK(t.leg_pos(4) == -1);
  CHECK(t.slot_offset(1) == 2);
  CHECK(t.norm() == doctest::Approx(std::sqrt(2.0)));
  DenseTensor f = t.flipped();
  CHECK(f.legs[0].out == false);
  CHECK(f.legs[1].out == true);
  t.normalize();
  CHECK(t.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_state({{1, 1, true}}, std::vector<cd>(3)), ValidationError);
  CHECK_THROWS_AS(make_state({{1, 1, true}, {1, 1, false}}, std::vector<cd>(4)),
                  ValidationError);
}

TEST_CASE("epsilon loop closes to -2") {
  DenseTensor a = eps_tensor(1, true, 2, true);
  DenseTensor b = eps_tensor(1, false, 2, false);
  DenseTensor s = contract_pair(a, b, {{1, 1}, {2, 2}});
  REQUIRE(s.legs.empty());
  REQUIRE(s.data.size() == 1);
  CHECK(s.data[0].real() == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(std::abs(s.data[0].imag()) < 1e-12);
}

TEST_CASE("identity contraction is a no-op on the data") {
  std::mt19937_64 rng(11);
  DenseTensor st = random_tensor({{5, 2, true}}, rng);
  DenseTensor ident;
  ident.legs = {{5, 2, false}, {9, 2, true}};
  ident.data.assign(16, cd(0, 0));
  for (int i = 0; i < 4; ++i) ident.data[i + 4 * i] = cd(1, 0);
  DenseTensor out = contract_pair(st, ident, {{5, 5}});
  REQUIRE(out.legs.size() == 1);
  CHECK(out.legs[0].id == 9);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(out.data[i] - st.data[i]) < 1e-14);
}

TEST_CASE("parallel kernel matches the serial reference") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 6; ++trial) {
    DenseTensor a = random_tensor({{1, 2, true}, {2, 3, true}, {3, 1, false}}, rng);
    DenseTensor b = random_tensor({{2, 3, false}, {4, 2, true}, {3, 1, true}}, rng);
    DenseTensor p = contract_pair(a, b, {{2, 2}, {3, 3}}, true);
    DenseTensor s = contract_pair_serial(a, b, {{2, 2}, {3, 3}});
    REQUIRE(p.legs.size() == s.legs.size());
    for (size_t i = 0; i < p.legs.size(); ++i) CHECK(p.legs[i].id == s.legs[i].id);
    CHECK(rel_diff(p, s) < 1e-12);
  }
  // outer product path
  DenseTensor a = random_tensor({{1, 2, true}}, rng);
  DenseTensor b = random_tensor({{2, 1, false}}, rng);
  CHECK(rel_diff(contract_pair(a, b, {}), contract_pair_serial(a, b, {})) < 1e-13);
}

TEST_CASE("contraction validates leg compatibility") {
  std::mt19937_64 rng(7);
  DenseTensor a = random_tensor({{1, 2, true}}, rng);
  DenseTensor same_dir = random_tensor({{1, 2, true}}, rng);
  DenseTensor wrong_k = random_tensor({{1, 1, false}}, rng);
  CHECK_THROWS_AS(contract_pair(a, same_dir, {{1, 1}}), ValidationError);
  CHECK_THROWS_AS(contract_pair(a, wrong_k, {{1, 1}}), ValidationError);
  CHECK_THROWS_AS(contract_pair(a, a.flipped(), {{1, 1}, {1, 1}}), ValidationError);
  CHECK_THROWS_AS(contract_pair(a, a.flipped(), {{3, 3}}), ValidationError);
}

TEST_CASE("contract_many is order independent on a chain") {
  std::mt19937_64 rng(99);
  DenseTensor t1 = random_tensor({{1, 2, true}}, rng);
  DenseTensor t2 = random_tensor({{1, 2, false}, {2, 3, true}}, rng);
  DenseTensor t3 = random_tensor({{2, 3, false}, {3, 2, true}}, rng);
  DenseTensor t4 = random_tensor({{3, 2, false}}, rng);

  DenseTensor ref = contract_pair_serial(
      contract_pair_serial(contract_pair_serial(t1, t2, {{1, 1}}), t3, {{2, 2}}), t4,
      {{3, 3}});
  REQUIRE(ref.legs.empty());

  for (auto order : {std::vector<int>{0, 1, 2, 3}, {3, 1, 0, 2}, {2, 3, 1, 0}}) {
    std::vector<DenseTensor> ts;
    std::vector<DenseTensor> all{t1, t2, t3, t4};
    for (int i : order) ts.push_back(all[i]);
    DenseTensor got = contract_many(ts);
    REQUIRE(got.legs.empty());
    CHECK(std::abs(got.data[0] - ref.data[0]) <
          1e-10 * std::max(1.0, std::abs(ref.data[0])));
  }
}

TEST_CASE("contract_many handles disconnected pieces as outer products") {
  std::mt19937_64 rng(5);
  DenseTensor a1 = random_tensor({{1, 2, true}}, rng);
  DenseTensor a2 = random_tensor({{1, 2, false}}, rng);
  DenseTensor b1 = random_tensor({{9, 1, true}}, rng);
  DenseTensor b2 = random_tensor({{9, 1, false}}, rng);
  cd sa = contract_pair_serial(a1, a2, {{1, 1}}).data[0];
  cd sb = contract_pair_serial(b1, b2, {{9, 9}}).data[0];
  DenseTensor got = contract_many({a1, b1, a2, b2});
  REQUIRE(got.legs.empty());
  CHECK(std::abs(got.data[0] - sa * sb) < 1e-10 * std::abs(sa * sb));
}

TEST_CASE("reduced density of Bell and GHZ states") {
  Vec e = su2::epsilon_state();
  DenseTensor bell = make_state({{0, 2, true}}, {e(0), e(1), e(2), e(3)});
  bell.normalize();
  Mat rho = reduced_density(bell, {0});
  CHECK((rho - 0.5 * Mat::Identity(2, 2)).norm() < 1e-12);
  CHECK(entropy_bits(rho) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<cd> g(8, cd(0, 0));
  g[0] = g[7] = cd(1 / std::sqrt(2.0), 0);
  DenseTensor ghz = make_state({{0, 3, true}}, g);
  Mat r2 = reduced_density(ghz, {0, 1});
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = want(3, 3) = 0.5;
  CHECK((r2 - want).norm() < 1e-12);
  CHECK(entropy_bits(r2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy_bits(reduced_density(ghz, {0, 1, 2})) == doctest::Approx(0.0));
}

TEST_CASE("entropy of a fixed spectrum") {
  Mat rho = Mat::Zero(4, 4);
  rho(0, 0) = 0.5;
  rho(1, 1) = 0.25;
  rho(2, 2) = 0.25;
  CHECK(entropy_bits(rho) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(entropy_bits(std::vector<double>{0.5, 0.5, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  Mat bad = Mat::Identity(2, 2);
  bad(0, 1) = cd(0.2, 0.1);  // not hermitian
  CHECK_THROWS_AS(entropy_bits(bad), ValidationError);
}

TEST_CASE("sparse reduced eigenvalues match the dense oracle") {
  std::mt19937_64 rng(2024);
  const int n = 10;
  std::vector<cd> psi(1L << n, cd(0, 0));
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<long> pick(0, (1L << n) - 1);
  for (int i = 0; i < 40; ++i) psi[pick(rng)] = cd(g(rng), g(rng));
  const std::vector<int> region{1, 4, 7};

  std::vector<double> fast = reduced_eigenvalues(psi, n, region);

  DenseTensor st = make_state({{0, n, true}}, psi);
  st.normalize();
  Eigen::SelfAdjointEigenSolver<Mat> es(reduced_density(st, region));
  std::vector<double> dense(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(dense.rbegin(), dense.rend());

  REQUIRE(fast.size() <= dense.size());
  for (size_t i = 0; i < dense.size(); ++i) {
    double f = i < fast.size() ? fast[i] : 0.0;
    CHECK(std::abs(f - dense[i]) < 1e-10);
  }
  CHECK(entropy_bits(fast) == doctest::Approx(entropy_bits(dense)).epsilon(1e-9));
}

TEST_CASE("hs_inner on matching signatures") {
  Vec e = su2::epsilon_state();
  DenseTensor a = make_state({{0, 2, true}}, {e(0), e(1), e(2), e(3)});
  CHECK(hs_inner(a, a).real() == doctest::Approx(2.0));
  CHECK(std::abs(hs_inner(a, a).imag()) < 1e-15);
  CHECK_THROWS_AS(hs_inner(a, a.flipped()), ValidationError);
}

TEST_CASE("pairing state basics") {
  PairingState st;
  st.slots = 4;
  st.pairs = {{0, 2, eps_form()}, {1, 3, eps_form()}};
  CHECK(st.is_perfect_matching());
  CHECK(st.norm() == doctest::Approx(2.0));  // sqrt(2)*sqrt(2)

  PairingState bad = st;
  bad.pairs[1].b = 2;
  CHECK_FALSE(bad.is_perfect_matching());

  st.scalar = cd(0.5, 0);
  DenseTensor dense = pairing_to_dense(st);
  CHECK(dense.norm() == doctest::Approx(st.norm()));
}

TEST_CASE("single epsilon pair expands to the epsilon state") {
  PairingState st;
  st.slots = 2;
  st.pairs = {{0, 1, eps_form()}};
  DenseTensor d = pairing_to_dense(st);
  Vec e = su2::epsilon_state();
  REQUIRE(d.data.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(d.data[i] - e(i)) < 1e-15);
}

TEST_CASE("pairing entropy equals dense entropy on every region") {
  PairingState st;
  st.slots = 6;
  st.pairs = {{0, 3, eps_form()}, {1, 4, eps_form()}, {2, 5, eps_form()}};
  // one composed form (still proportional to a unitary)
  Mat2 u;
  u << cd(0.6, 0), cd(0, 0.8), cd(0, 0.8), cd(0.6, 0);
  st.pairs[1].form = eps_form() * u;

  DenseTensor d = pairing_to_dense(st);
  for (auto region : std::vector<std::vector<int>>{
           {0}, {0, 1}, {0, 1, 2}, {0, 3}, {2, 4, 5}, {1, 2, 3, 4}}) {
    double fast = pairing_entropy(st, region);
    double dense = entropy_bits(reduced_eigenvalues(d.data, st.slots, region));
    CHECK(std::abs(fast - dense) < 1e-9);
  }

  PairingState skew = st;
  skew.pairs[0].form << cd(1, 0), cd(0, 0), cd(0, 0), cd(0.5, 0);
  CHECK_THROWS_AS(pairing_entropy(skew, {0}), ValidationError);
  CHECK_NOTHROW(pairing_entropy(skew, {0, 3}));  // pair not split, form unchecked
}

TEST_CASE("pairing amplitudes match the dense expansion") {
  PairingState st;
  st.slots = 4;
  st.pairs = {{0, 1, eps_form()}, {2, 3, eps_form()}};
  st.scalar = cd(0, -1);
  auto amps = pairing_amplitudes(st);
  CHECK(amps.size() == 4);
  DenseTensor d = pairing_to_dense(st);
  std::vector<cd> rebuilt(d.data.size(), cd(0, 0));
  for (auto& [idx, v] : amps) rebuilt[idx] += v;
  for (size_t i = 0; i < rebuilt.size(); ++i) CHECK(std::abs(rebuilt[i] - d.data[i]) < 1e-15);
}

TEST_CASE("pairing JSON round-trip") {
  PairingState st;
  st.slots = 4;
  st.pairs = {{0, 2, eps_form()}, {1, 3, eps_form()}};
  st.perms[0] = {1, 0};
  st.perms[3] = {0, 1};
  st.scalar = cd(-1, 0.25);
  PairingState back = pairing_from_json(pairing_to_json(st));
  CHECK(back.slots == st.slots);
  REQUIRE(back.pairs.size() == 2);
  CHECK(back.pairs[0].a == 0);
  CHECK(back.pairs[0].b == 2);
  CHECK((back.pairs[0].form - eps_form()).norm() < 1e-15);
  CHECK(back.perms == st.perms);
  CHECK(std::abs(back.scalar - st.scalar) < 1e-15);

  // a composed form forces the forms extension and survives the trip
  Mat2 u;
  u << cd(0, 1), cd(0.5, 0), cd(0, 0), cd(1, -2);
  st.pairs[1].form = u;
  PairingState back2 = pairing_from_json(pairing_to_json(st));
  CHECK((back2.pairs[1].form - u).norm() < 1e-14);
  CHECK((back2.pairs[0].form - eps_form()).norm() < 1e-14);

  CHECK_THROWS_AS(pairing_from_json("{not json"), ValidationError);
  CHECK_THROWS_AS(pairing_from_json("{\"slots\": 2, \"pairs\": [[0, 0]]}"), ValidationError);
}
