#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "hitlab/tensor.hpp"

namespace hitlab::tn {

Mat2 eps_form() {
  Mat2 e = Mat2::Zero();
  e(0, 1) = cd(0, 1);
  e(1, 0) = cd(0, -1);
  return e;
}

bool PairingState::is_perfect_matching() const {
  std::vector<int> seen(slots, 0);
  for (const auto& p : pairs) {
    if (p.a < 0 || p.a >= slots || p.b < 0 || p.b >= slots || p.a == p.b) return false;
    seen[p.a]++;
    seen[p.b]++;
  }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

double PairingState::norm() const {
  double n = std::abs(scalar);
  for (const auto& p : pairs) n *= p.form.norm();
  return n;
}

double pairing_entropy(const PairingState& st, const std::vector<int>& region_slots) {
  std::vector<bool> in_region(st.slots, false);
  for (int s : region_slots) {
    require(s >= 0 && s < st.slots, "pairing_entropy: slot out of range");
    in_region[s] = true;
  }
  require(st.is_perfect_matching(), "pairing_entropy: not a perfect matching");
  int crossing = 0;
  for (const auto& p : st.pairs) {
    if (in_region[p.a] == in_region[p.b]) continue;
    // exactly one bit per split pair requires the pair marginal to be
    // maximally mixed, i.e. form * form^dagger proportional to identity
    Mat2 g = p.form * p.form.adjoint();
    const double tr = g.trace().real();
    require((g - 0.5 * tr * Mat2::Identity()).norm() < 1e-10,
            "pairing_entropy: split pair form is not proportional to a unitary");
    ++crossing;
  }
  return double(crossing);
}

std::vector<std::pair<long, cd>> pairing_amplitudes(const PairingState& st) {
  require(st.is_perfect_matching(), "pairing_amplitudes: not a perfect matching");
  struct Term {
    long bits;
    cd amp;
  };
  std::vector<std::pair<long, cd>> acc{{0L, st.scalar}};
  std::vector<std::pair<long, cd>> next;
  for (const auto& p : st.pairs) {
    std::vector<Term> terms;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        const cd v = p.form(x, y);
        if (v == cd(0, 0)) continue;
        long bits = (long(x) << p.a) | (long(y) << p.b);
        terms.push_back({bits, v});
      }
    next.clear();
    next.reserve(acc.size() * terms.size());
    for (const auto& [bits, amp] : acc)
      for (const auto& t : terms) next.push_back({bits | t.bits, amp * t.amp});
    acc.swap(next);
    require(acc.size() <= (1L << 26), "pairing_amplitudes: expansion too large");
  }
  return acc;
}

DenseTensor pairing_to_dense(const PairingState& st, int max_slots) {
  require(st.slots <= max_slots, "pairing_to_dense: slot count above limit");
  require(st.is_perfect_matching(), "pairing_to_dense: not a perfect matching");
  DenseTensor t;
  t.legs = {{0, st.slots, true}};
  t.data.assign(1L << st.slots, cd(0, 0));
  for (const auto& [idx, amp] : pairing_amplitudes(st)) t.data[idx] += amp;
  return t;
}

namespace {
bool is_eps(const Mat2& m) { return (m - eps_form()).norm() < 1e-15; }
}  // namespace

std::string pairing_to_json(const PairingState& st) {
  nlohmann::json j;
  j["slots"] = st.slots;
  auto& pairs = j["pairs"] = nlohmann::json::array();
  bool all_eps = true;
  for (const auto& p : st.pairs) {
    pairs.push_back({p.a, p.b});
    all_eps = all_eps && is_eps(p.form);
  }
  auto& perms = j["perms"] = nlohmann::json::object();
  for (const auto& [edge, perm] : st.perms) perms[std::to_string(edge)] = perm;
  j["scalar"] = {st.scalar.real(), st.scalar.imag()};
  if (!all_eps) {
    // extension for composed forms: row-major 2x2 per pair as [re, im] entries
    auto& forms = j["forms"] = nlohmann::json::array();
    for (const auto& p : st.pairs) {
      nlohmann::json f = nlohmann::json::array();
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) f.push_back({p.form(x, y).real(), p.form(x, y).imag()});
      forms.push_back(f);
    }
  }
  return j.dump(2);
}

PairingState pairing_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("pairing JSON parse error: ") + e.what());
  }
  try {
    PairingState st;
    st.slots = j.at("slots").get<int>();
    for (const auto& p : j.at("pairs")) {
      require(p.size() == 2, "pairing JSON: pair must have two slots");
      st.pairs.push_back({p[0].get<int>(), p[1].get<int>(), eps_form()});
    }
    if (j.contains("perms"))
      for (auto it = j["perms"].begin(); it != j["perms"].end(); ++it)
        st.perms[std::stoi(it.key())] = it.value().get<std::vector<int>>();
    if (j.contains("scalar")) {
      auto s = j["scalar"];
      st.scalar = cd(s.at(0).get<double>(), s.at(1).get<double>());
    }
    if (j.contains("forms")) {
      const auto& forms = j["forms"];
      require(forms.size() == st.pairs.size(), "pairing JSON: forms/pairs length mismatch");
      for (size_t i = 0; i < st.pairs.size(); ++i) {
        int e = 0;
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) {
            st.pairs[i].form(x, y) =
                cd(forms[i][e][0].get<double>(), forms[i][e][1].get<double>());
            ++e;
          }
      }
    }
    require(st.is_perfect_matching(), "pairing JSON: not a perfect matching");
    return st;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("pairing JSON structure error: ") + e.what());
  }
}

}  // namespace hitlab::tn
