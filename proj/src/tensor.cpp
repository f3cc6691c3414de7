#include "hitlab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hitlab {

void set_thread_cap(int threads) {
#ifdef _OPENMP
  if (threads <= 0) {
    if (const char* env = std::getenv("HITLAB_THREADS")) threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace hitlab

namespace hitlab::tn {

int DenseTensor::total_slots() const {
  int n = 0;
  for (const auto& l : legs) n += l.k;
  return n;
}

int DenseTensor::leg_pos(int leg_id) const {
  for (size_t i = 0; i < legs.size(); ++i)
    if (legs[i].id == leg_id) return int(i);
  return -1;
}

int DenseTensor::slot_offset(int pos) const {
  int off = 0;
  for (int i = 0; i < pos; ++i) off += legs[i].k;
  return off;
}

DenseTensor DenseTensor::flipped() const {
  DenseTensor t = *this;
  for (auto& l : t.legs) l.out = !l.out;
  return t;
}

double DenseTensor::norm() const {
  double s = 0;
  for (const cd& v : data) s += std::norm(v);
  return std::sqrt(s);
}

void DenseTensor::normalize() {
  double n = norm();
  require(n > 0, "normalize: zero tensor");
  for (cd& v : data) v /= n;
}

DenseTensor make_state(std::vector<Leg> legs, std::vector<cd> data) {
  DenseTensor t{std::move(legs), std::move(data)};
  require(long(t.data.size()) == t.dim(), "make_state: data length mismatch");
  for (size_t i = 0; i < t.legs.size(); ++i)
    for (size_t j = i + 1; j < t.legs.size(); ++j)
      require(t.legs[i].id != t.legs[j].id, "make_state: duplicate leg id");
  return t;
}

namespace {

struct ContractionPlan {
  std::vector<int> a_con_slots, b_con_slots;  // global slot indices, aligned
  std::vector<int> a_free_slots, b_free_slots;
  std::vector<Leg> result_legs;
};

ContractionPlan plan_contraction(const DenseTensor& a, const DenseTensor& b,
                                 const std::vector<std::pair<int, int>>& leg_pairs) {
  ContractionPlan p;
  std::vector<bool> a_used(a.legs.size(), false), b_used(b.legs.size(), false);
  for (auto [ida, idb] : leg_pairs) {
    int pa = a.leg_pos(ida), pb = b.leg_pos(idb);
    require(pa >= 0 && pb >= 0, "contract: leg id not found");
    require(!a_used[pa] && !b_used[pb], "contract: leg contracted twice");
    require(a.legs[pa].k == b.legs[pb].k, "contract: slot count mismatch");
    require(a.legs[pa].out != b.legs[pb].out, "contract: directions must be opposite");
    a_used[pa] = b_used[pb] = true;
    int oa = a.slot_offset(pa), ob = b.slot_offset(pb);
    for (int s = 0; s < a.legs[pa].k; ++s) {
      p.a_con_slots.push_back(oa + s);
      p.b_con_slots.push_back(ob + s);
    }
  }
  for (size_t i = 0; i < a.legs.size(); ++i)
    if (!a_used[i]) {
      p.result_legs.push_back(a.legs[i]);
      int o = a.slot_offset(int(i));
      for (int s = 0; s < a.legs[i].k; ++s) p.a_free_slots.push_back(o + s);
    }
  for (size_t i = 0; i < b.legs.size(); ++i)
    if (!b_used[i]) {
      p.result_legs.push_back(b.legs[i]);
      int o = b.slot_offset(int(i));
      for (int s = 0; s < b.legs[i].k; ++s) p.b_free_slots.push_back(o + s);
    }
  for (size_t i = 0; i < p.result_legs.size(); ++i)
    for (size_t j = i + 1; j < p.result_legs.size(); ++j)
      require(p.result_legs[i].id != p.result_legs[j].id, "contract: duplicate free leg id");
  return p;
}

// scatter table: value v in [0, 2^bits) -> sum of (bit i of v) << slots[i]
std::vector<long> scatter_table(const std::vector<int>& slots) {
  const size_t n = slots.size();
  std::vector<long> table(1L << n, 0);
  for (long v = 1; v < long(table.size()); ++v) {
    int low = __builtin_ctzl(v);
    table[v] = table[v & (v - 1)] | (1L << slots[low]);
  }
  return table;
}

}  // namespace

DenseTensor contract_pair(const DenseTensor& a, const DenseTensor& b,
                          const std::vector<std::pair<int, int>>& leg_pairs, bool parallel) {
  ContractionPlan p = plan_contraction(a, b, leg_pairs);
  const int nfa = int(p.a_free_slots.size());
  const int nfb = int(p.b_free_slots.size());
  const int nc = int(p.a_con_slots.size());
  const auto sa_free = scatter_table(p.a_free_slots);
  const auto sb_free = scatter_table(p.b_free_slots);
  const auto sa_con = scatter_table(p.a_con_slots);
  const auto sb_con = scatter_table(p.b_con_slots);

  DenseTensor out;
  out.legs = p.result_legs;
  out.data.assign(1L << (nfa + nfb), cd(0, 0));
  const long na = 1L << nfa, nb = 1L << nfb, ncn = 1L << nc;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && nb > 32)
#endif
  for (long fb = 0; fb < nb; ++fb) {
    const long ob = sb_free[fb];
    for (long fa = 0; fa < na; ++fa) {
      const long oa = sa_free[fa];
      cd acc(0, 0);
      for (long c = 0; c < ncn; ++c) acc += a.data[oa | sa_con[c]] * b.data[ob | sb_con[c]];
      out.data[fa | (fb << nfa)] = acc;
    }
  }
  (void)parallel;
  return out;
}

DenseTensor contract_pair_serial(const DenseTensor& a, const DenseTensor& b,
                                 const std::vector<std::pair<int, int>>& leg_pairs) {
  ContractionPlan p = plan_contraction(a, b, leg_pairs);
  const int nfa = int(p.a_free_slots.size());
  const int nfb = int(p.b_free_slots.size());
  const int nc = int(p.a_con_slots.size());
  DenseTensor out;
  out.legs = p.result_legs;
  out.data.assign(1L << (nfa + nfb), cd(0, 0));
  auto scatter = [](long v, const std::vector<int>& slots) {
    long r = 0;
    for (size_t i = 0; i < slots.size(); ++i)
      if (v & (1L << i)) r |= 1L << slots[i];
    return r;
  };
  for (long fa = 0; fa < (1L << nfa); ++fa)
    for (long fb = 0; fb < (1L << nfb); ++fb) {
      cd acc(0, 0);
      for (long c = 0; c < (1L << nc); ++c)
        acc += a.data[scatter(fa, p.a_free_slots) | scatter(c, p.a_con_slots)] *
               b.data[scatter(fb, p.b_free_slots) | scatter(c, p.b_con_slots)];
      out.data[fa | (fb << nfa)] = acc;
    }
  return out;
}

DenseTensor contract_many(std::vector<DenseTensor> tensors, bool parallel) {
  require(!tensors.empty(), "contract_many: empty network");
  while (tensors.size() > 1) {
    // count shared legs between each pair; pick the contraction with the
    // smallest resulting slot count
    int best_i = -1, best_j = -1, best_slots = 1 << 30;
    bool any_shared = false;
    for (size_t i = 0; i < tensors.size(); ++i)
      for (size_t j = i + 1; j < tensors.size(); ++j) {
        int shared = 0;
        for (const auto& la : tensors[i].legs)
          if (tensors[j].leg_pos(la.id) >= 0) shared += 2 * la.k;
        if (shared == 0) continue;
        any_shared = true;
        int slots = tensors[i].total_slots() + tensors[j].total_slots() - shared;
        if (slots < best_slots) {
          best_slots = slots;
          best_i = int(i);
          best_j = int(j);
        }
      }
    if (!any_shared) {
      best_i = 0;
      best_j = 1;  // outer product of disconnected pieces
    }
    std::vector<std::pair<int, int>> pairs;
    for (const auto& la : tensors[best_i].legs)
      if (tensors[best_j].leg_pos(la.id) >= 0) pairs.push_back({la.id, la.id});
    DenseTensor merged = contract_pair(tensors[best_i], tensors[best_j], pairs, parallel);
    tensors.erase(tensors.begin() + best_j);
    tensors[best_i] = std::move(merged);
  }
  return tensors[0];
}

Mat reduced_density(const DenseTensor& state, const std::vector<int>& keep_slots) {
  const int n = state.total_slots();
  std::vector<bool> keep_mask(n, false);
  for (int s : keep_slots) {
    require(s >= 0 && s < n, "reduced_density: slot out of range");
    require(!keep_mask[s], "reduced_density: duplicate slot");
    keep_mask[s] = true;
  }
  const int nk = int(keep_slots.size());
  std::vector<int> rest;
  for (int s = 0; s < n; ++s)
    if (!keep_mask[s]) rest.push_back(s);
  const long dk = 1L << nk;
  Mat rho = Mat::Zero(dk, dk);
  std::vector<long> keep_scatter(dk, 0);
  for (long v = 1; v < dk; ++v) {
    int low = __builtin_ctzl(v);
    keep_scatter[v] = keep_scatter[v & (v - 1)] | (1L << keep_slots[low]);
  }
  const long dr = 1L << int(rest.size());
  Vec col(dk);
  for (long r = 0; r < dr; ++r) {
    long base = 0;
    for (size_t i = 0; i < rest.size(); ++i)
      if (r & (1L << i)) base |= 1L << rest[i];
    for (long ki = 0; ki < dk; ++ki) col(ki) = state.data[base | keep_scatter[ki]];
    rho.noalias() += col * col.adjoint();
  }
  double tr = rho.trace().real();
  require(tr > 0, "reduced_density: zero state");
  return rho / tr;
}

std::vector<double> reduced_eigenvalues(const std::vector<cd>& psi, int n_slots,
                                        const std::vector<int>& region) {
  std::vector<int> rest;
  std::vector<bool> in_region(n_slots, false);
  for (int s : region) {
    require(s >= 0 && s < n_slots, "reduced_eigenvalues: slot out of range");
    in_region[s] = true;
  }
  for (int s = 0; s < n_slots; ++s)
    if (!in_region[s]) rest.push_back(s);

  // gather nonzeros grouped by complement config; compact the region configs
  std::unordered_map<long, int> region_index;
  std::vector<long> region_configs;
  struct Entry {
    long rest;
    int r;
    cd amp;
  };
  std::vector<Entry> entries;
  double norm2 = 0;
  for (long idx = 0; idx < long(psi.size()); ++idx) {
    const cd v = psi[idx];
    if (v == cd(0, 0)) continue;
    norm2 += std::norm(v);
    long rkey = 0, ckey = 0;
    for (size_t i = 0; i < region.size(); ++i)
      if (idx & (1L << region[i])) rkey |= 1L << i;
    for (size_t i = 0; i < rest.size(); ++i)
      if (idx & (1L << rest[i])) ckey |= 1L << i;
    auto [it, fresh] = region_index.try_emplace(rkey, int(region_configs.size()));
    if (fresh) region_configs.push_back(rkey);
    entries.push_back({ckey, it->second, v});
  }
  require(norm2 > 0, "reduced_eigenvalues: zero state");
  const int m = int(region_configs.size());
  require(m <= 4096, "reduced_eigenvalues: compact dimension too large");
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.rest < b.rest;
  });
  Mat gram = Mat::Zero(m, m);
  size_t i = 0;
  while (i < entries.size()) {
    size_t j = i;
    while (j < entries.size() && entries[j].rest == entries[i].rest) ++j;
    for (size_t x = i; x < j; ++x)
      for (size_t y = i; y < j; ++y)
        gram(entries[x].r, entries[y].r) += entries[x].amp * std::conj(entries[y].amp);
    i = j;
  }
  gram /= norm2;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  std::vector<double> evs;
  for (int e = 0; e < m; ++e) evs.push_back(std::max(0.0, es.eigenvalues()(e)));
  std::sort(evs.rbegin(), evs.rend());
  return evs;
}

double entropy_bits(const Mat& rho) {
  require(rho.rows() == rho.cols(), "entropy_bits: non-square");
  require((rho - rho.adjoint()).norm() < 1e-8, "entropy_bits: not hermitian");
  require(std::abs(rho.trace().real() - 1.0) < 1e-6, "entropy_bits: trace != 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  std::vector<double> evs(es.eigenvalues().data(), es.eigenvalues().data() + rho.rows());
  for (double e : evs) require(e > -1e-8, "entropy_bits: not positive semidefinite");
  return entropy_bits(evs);
}

double entropy_bits(const std::vector<double>& eigenvalues) {
  double s = 0;
  for (double p : eigenvalues)
    if (p > TOL_EIG) s -= p * std::log2(p);
  return s;
}

DenseTensor conj_tensor(const DenseTensor& t) {
  DenseTensor out = t;
  for (auto& l : out.legs) l.out = !l.out;
  for (auto& v : out.data) v = std::conj(v);
  return out;
}

namespace {

// Relocate bits: out index bit dst[s] = in index bit s.
std::vector<cd> scatter_bits(const std::vector<cd>& data, const std::vector<int>& dst) {
  const int n = int(dst.size());
  std::vector<cd> out(data.size(), cd(0, 0));
  for (long idx = 0; idx < long(data.size()); ++idx) {
    if (data[idx] == cd(0, 0)) continue;
    long o = 0;
    for (int s = 0; s < n; ++s)
      if (idx & (1L << s)) o |= 1L << dst[s];
    out[o] = data[idx];
  }
  return out;
}

}  // namespace

DenseTensor permute_legs(const DenseTensor& t, const std::vector<int>& order) {
  require(order.size() == t.legs.size(), "permute_legs: order size mismatch");
  std::vector<bool> seen(order.size(), false);
  for (int p : order) {
    require(p >= 0 && p < int(order.size()) && !seen[p], "permute_legs: not a permutation");
    seen[p] = true;
  }
  DenseTensor out;
  std::vector<int> dst(t.total_slots());
  int out_off = 0;
  for (int j = 0; j < int(order.size()); ++j) {
    out.legs.push_back(t.legs[order[j]]);
    const int in_off = t.slot_offset(order[j]);
    for (int s = 0; s < t.legs[order[j]].k; ++s) dst[in_off + s] = out_off + s;
    out_off += t.legs[order[j]].k;
  }
  out.data = scatter_bits(t.data, dst);
  return out;
}

DenseTensor permute_leg_slots(const DenseTensor& t, int leg_id,
                              const std::vector<int>& perm) {
  const int pos = t.leg_pos(leg_id);
  require(pos >= 0, "permute_leg_slots: no such leg");
  const int k = t.legs[pos].k;
  require(int(perm.size()) == k, "permute_leg_slots: perm size mismatch");
  std::vector<bool> seen(k, false);
  for (int p : perm) {
    require(p >= 0 && p < k && !seen[p], "permute_leg_slots: not a permutation");
    seen[p] = true;
  }
  const int off = t.slot_offset(pos);
  std::vector<int> dst(t.total_slots());
  for (int s = 0; s < t.total_slots(); ++s) dst[s] = s;
  for (int j = 0; j < k; ++j) dst[off + perm[j]] = off + j;
  DenseTensor out;
  out.legs = t.legs;
  out.data = scatter_bits(t.data, dst);
  return out;
}

Mat reduced_density_sparse(const std::vector<std::pair<long, cd>>& amps, int n_slots,
                           const std::vector<int>& keep) {
  std::vector<bool> mask(n_slots, false);
  for (int s : keep) {
    require(s >= 0 && s < n_slots, "reduced_density_sparse: slot out of range");
    require(!mask[s], "reduced_density_sparse: duplicate slot");
    mask[s] = true;
  }
  require(keep.size() <= 12, "reduced_density_sparse: region too large");
  std::vector<int> rest;
  for (int s = 0; s < n_slots; ++s)
    if (!mask[s]) rest.push_back(s);
  struct Entry {
    long rest;
    long region;
    cd amp;
  };
  std::vector<Entry> entries;
  double norm2 = 0;
  for (const auto& [idx, v] : amps) {
    if (v == cd(0, 0)) continue;
    norm2 += std::norm(v);
    long kkey = 0, rkey = 0;
    for (size_t i = 0; i < keep.size(); ++i)
      if (idx & (1L << keep[i])) kkey |= 1L << i;
    for (size_t i = 0; i < rest.size(); ++i)
      if (idx & (1L << rest[i])) rkey |= 1L << i;
    entries.push_back({rkey, kkey, v});
  }
  require(norm2 > 0, "reduced_density_sparse: zero state");
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.rest < b.rest;
  });
  const long dk = 1L << keep.size();
  Mat rho = Mat::Zero(dk, dk);
  size_t i = 0;
  while (i < entries.size()) {
    size_t j = i;
    while (j < entries.size() && entries[j].rest == entries[i].rest) ++j;
    for (size_t x = i; x < j; ++x)
      for (size_t y = i; y < j; ++y)
        rho(entries[x].region, entries[y].region) +=
            entries[x].amp * std::conj(entries[y].amp);
    i = j;
  }
  return rho / norm2;
}

cd hs_inner(const DenseTensor& a, const DenseTensor& b) {
  require(a.legs.size() == b.legs.size(), "hs_inner: leg signature mismatch");
  for (size_t i = 0; i < a.legs.size(); ++i)
    require(a.legs[i].id == b.legs[i].id && a.legs[i].k == b.legs[i].k &&
                a.legs[i].out == b.legs[i].out,
            "hs_inner: leg signature mismatch");
  cd acc(0, 0);
  for (size_t i = 0; i < a.data.size(); ++i) acc += std::conj(a.data[i]) * b.data[i];
  return acc;
}

std::string tensor_to_json(const DenseTensor& t) {
  nlohmann::json j;
  auto& legs = j["legs"] = nlohmann::json::array();
  for (const auto& l : t.legs)
    legs.push_back({{"id", l.id}, {"k", l.k}, {"dir", l.out ? "out" : "in"}});
  auto& data = j["data"] = nlohmann::json::array();
  for (const cd& v : t.data) data.push_back({v.real(), v.imag()});
  return j.dump();
}

DenseTensor tensor_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("tensor JSON parse error: ") + e.what());
  }
  try {
    std::vector<Leg> legs;
    for (const auto& jl : j.at("legs")) {
      const std::string dir = jl.at("dir").get<std::string>();
      require(dir == "in" || dir == "out", "tensor JSON: dir must be in or out");
      const int k = jl.at("k").get<int>();
      require(k >= 1, "tensor JSON: leg width must be positive");
      legs.push_back({jl.at("id").get<int>(), k, dir == "out"});
    }
    std::vector<cd> data;
    for (const auto& jv : j.at("data")) {
      require(jv.is_array() && jv.size() == 2, "tensor JSON: entries are [re, im]");
      data.emplace_back(jv[0].get<double>(), jv[1].get<double>());
    }
    return make_state(std::move(legs), std::move(data));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("tensor JSON structure error: ") + e.what());
  }
}

}  // namespace hitlab::tn
