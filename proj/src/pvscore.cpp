#include "pvsa/pvscore.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "pvsa/parallel.hpp"
#include "pvsa/random.hpp"

namespace pvsa {

namespace {

std::string vec_field(const std::string& field, std::size_t i) { return field + "[" + std::to_string(i) + "]"; }

void check_length(const QVec& v, std::size_t dim, const std::string& field) {
  if (v.size() != dim)
    throw InvalidInstance(field + ": expected " + std::to_string(dim) + " coordinates, got " +
                          std::to_string(v.size()));
}

bool in_span(const std::vector<QVec>& basis, const QVec& v) {
  std::vector<QVec> ext = basis;
  ext.push_back(v);
  return rank_of_span(basis) == rank_of_span(ext);
}

}  // namespace

Mask PvsInstance::full_mask() const {
  return psi_v.size() >= 64 ? ~Mask{0} : (Mask{1} << psi_v.size()) - 1;
}

std::vector<QVec> PvsInstance::delta0_g() const {
  std::vector<QVec> out;
  for (int i : g_simple.indices()) out.push_back(datum.simple_roots[i]);
  return out;
}

void finalize(PvsInstance& inst) {
  const auto& d = inst.datum;
  std::size_t dim = d.ambient_dim;
  if (!inst.g_simple.subset_of(ParabolicIndex::full(d.rank())))
    throw InvalidInstance("g_simple: index outside the simple roots of " + d.type_label);
  if (inst.psi_v.size() > 64) throw CapExceeded("psi_v: more than 64 weights");
  if (inst.mult.empty()) inst.mult.assign(inst.psi_v.size(), 1);
  if (inst.mult.size() != inst.psi_v.size()) throw InvalidInstance("psi_v: multiplicity list has the wrong length");
  std::set<QVec, QVecLess> seen;
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j) {
    check_length(inst.psi_v[j], dim, vec_field("psi_v", j) + ".weight");
    if (inst.mult[j] < 1) throw InvalidInstance(vec_field("psi_v", j) + ".mult: must be positive");
    if (!seen.insert(inst.psi_v[j]).second) throw InvalidInstance(vec_field("psi_v", j) + ": repeated weight");
  }
  for (std::size_t i = 0; i < inst.xstar_g.size(); ++i) check_length(inst.xstar_g[i], dim, vec_field("xstar_g", i));
  for (std::size_t i = 0; i < inst.fund_chars.size(); ++i)
    check_length(inst.fund_chars[i], dim, vec_field("fund_chars", i));

  inst.phi_g_plus = roots_supported_on(d, inst.g_simple);
  inst.g_roots.clear();
  for (int k : inst.phi_g_plus) {
    inst.g_roots.push_back(d.positive_roots[k]);
    inst.g_roots.push_back(neg(d.positive_roots[k]));
  }
  inst.simple_slot.assign(d.rank(), -1);
  for (std::size_t p = 0; p < inst.phi_g_plus.size(); ++p) {
    const auto& c = d.root_coeffs[inst.phi_g_plus[p]];
    if (std::accumulate(c.begin(), c.end(), 0) == 1)
      inst.simple_slot[std::find(c.begin(), c.end(), 1) - c.begin()] = static_cast<int>(2 * p);
  }
  std::map<QVec, int, QVecLess> where;
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j) where[inst.psi_v[j]] = static_cast<int>(j);
  inst.shift.assign(inst.psi_v.size(), std::vector<int>(inst.g_roots.size(), -1));
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j)
    for (std::size_t r = 0; r < inst.g_roots.size(); ++r) {
      auto it = where.find(add(inst.psi_v[j], inst.g_roots[r]));
      if (it != where.end()) inst.shift[j][r] = it->second;
    }
  inst.slot_offset.assign(inst.psi_v.size(), 0);
  inst.slot_count = 0;
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j) {
    inst.slot_offset[j] = inst.slot_count;
    inst.slot_count += static_cast<std::size_t>(inst.mult[j]);
  }

  inst.delta0 = zero_vec(dim);
  for (int k : inst.phi_g_plus) inst.delta0 = add(inst.delta0, d.positive_roots[k]);
  inst.deltaV = zero_vec(dim);
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j) axpy(inst.deltaV, Q(inst.mult[j]), inst.psi_v[j]);

  for (std::size_t i = 0; i < inst.xstar_g.size(); ++i)
    for (int s : inst.g_simple.indices())
      if (sgn(dot(inst.xstar_g[i], d.simple_coroots[s])) != 0)
        throw InvalidInstance(vec_field("xstar_g", i) + ": does not vanish on the coroot of simple root " +
                              std::to_string(s + 1));
  for (std::size_t i = 0; i < inst.fund_chars.size(); ++i)
    if (!in_span(inst.xstar_g, inst.fund_chars[i]))
      throw InvalidInstance(vec_field("fund_chars", i) + ": not in the span of xstar_g");
  std::vector<QVec> xg = inst.xstar_g;
  for (int k : inst.phi_g_plus) xg.push_back(d.positive_roots[k]);
  if (!inst.psi_v.empty() && !in_span(xg, inst.deltaV))
    throw InvalidInstance("psi_v: the sum of the weights is not in the span of xstar_g and the roots of G");

  if (inst.oracle) {
    if (inst.oracle->slot_count == 0) inst.oracle->slot_count = inst.slot_count;
    if (inst.oracle->slot_count != inst.slot_count)
      throw InvalidInstance("oracle: covers " + std::to_string(inst.oracle->slot_count) + " slots, the weights have " +
                            std::to_string(inst.slot_count));
    try {
      validate_oracle(*inst.oracle);
    } catch (const ShapeMismatch& e) {
      throw InvalidInstance(std::string("oracle: ") + e.what());
    }
  }
  std::vector<int> owner(inst.psi_v.size(), -1);
  for (std::size_t c = 0; c < inst.components.size(); ++c)
    for (int j : inst.components[c])
      if (j < 0 || static_cast<std::size_t>(j) >= inst.psi_v.size())
        throw InvalidInstance(vec_field("components", c) + ": weight index out of range");
}

std::vector<int> mask_indices(Mask m) {
  std::vector<int> out;
  for (int j = 0; m; ++j, m >>= 1)
    if (m & 1) out.push_back(j);
  return out;
}

Mask mask_of(const std::vector<int>& indices) {
  Mask m = 0;
  for (int j : indices) m |= Mask{1} << j;
  return m;
}

int mask_size(Mask m) { return __builtin_popcountll(m); }

namespace {
bool has(Mask m, int j) { return j >= 0 && ((m >> j) & 1); }
}  // namespace

QVec lambda_of(const PvsInstance& inst, Mask u) {
  QVec l = inst.delta0;
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j)
    if (!has(u, static_cast<int>(j))) axpy(l, Q(inst.mult[j]), inst.psi_v[j]);
  return l;
}

std::vector<int> levi_slots(const PvsInstance& inst, ParabolicIndex levi) {
  std::vector<int> out;
  for (std::size_t p = 0; p < inst.phi_g_plus.size(); ++p) {
    const auto& c = inst.datum.root_coeffs[inst.phi_g_plus[p]];
    bool inside = true;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] && !levi.contains(static_cast<int>(i))) inside = false;
    if (inside) {
      out.push_back(static_cast<int>(2 * p));
      out.push_back(static_cast<int>(2 * p + 1));
    }
  }
  return out;
}

std::vector<int> parabolic_slots(const PvsInstance& inst, ParabolicIndex levi) {
  std::vector<int> out;
  for (std::size_t p = 0; p < inst.phi_g_plus.size(); ++p) out.push_back(static_cast<int>(2 * p));
  for (int s : levi_slots(inst, levi))
    if (s % 2 == 1) out.push_back(s);
  return out;
}

Mask star_closure(const PvsInstance& inst, Mask u, const std::vector<int>& root_slots) {
  std::vector<int> work = mask_indices(u);
  while (!work.empty()) {
    int j = work.back();
    work.pop_back();
    for (int r : root_slots) {
      int k = inst.shift[j][r];
      if (k >= 0 && !has(u, k)) {
        u |= Mask{1} << k;
        work.push_back(k);
      }
    }
  }
  return u;
}

bool is_p0_stable(const PvsInstance& inst, Mask u) {
  for (int j : mask_indices(u))
    for (std::size_t p = 0; p < inst.phi_g_plus.size(); ++p) {
      int k = inst.shift[j][2 * p];
      if (k >= 0 && !has(u, k)) return false;
    }
  return true;
}

std::optional<ParabolicIndex> stabilizer_of(const PvsInstance& inst, Mask u) {
  if (!is_p0_stable(inst, u)) return std::nullopt;
  std::vector<int> keep;
  for (int i : inst.g_simple.indices()) {
    int slot = inst.simple_slot[i] + 1;
    bool closed = true;
    for (int j : mask_indices(u)) {
      int k = inst.shift[j][slot];
      if (k >= 0 && !has(u, k)) closed = false;
    }
    if (closed) keep.push_back(i);
  }
  return ParabolicIndex::of(keep);
}

namespace {

// Augmenting-path bipartite matching. Returns match of each left vertex, -1
// when unmatched.
std::vector<int> max_matching(std::size_t left, std::size_t right, const std::vector<std::vector<int>>& adj) {
  std::vector<int> match_right(right, -1), match_left(left, -1);
  std::vector<char> visited;
  std::function<bool(int)> augment = [&](int v) {
    for (int w : adj[v]) {
      if (visited[w]) continue;
      visited[w] = 1;
      if (match_right[w] < 0 || augment(match_right[w])) {
        match_right[w] = v;
        match_left[v] = w;
        return true;
      }
    }
    return false;
  };
  for (std::size_t v = 0; v < left; ++v) {
    visited.assign(right, 0);
    augment(static_cast<int>(v));
  }
  return match_left;
}

}  // namespace

std::optional<MatchingWitness> matching_full(const PvsInstance& inst, Mask u) {
  std::vector<std::pair<int, int>> left;
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j)
    for (int c = 0; c < inst.mult[j]; ++c) left.emplace_back(static_cast<int>(j), c);
  std::size_t nroot = inst.g_roots.size(), nzero = inst.datum.ambient_dim;
  std::vector<std::vector<int>> adj(left.size());
  for (std::size_t v = 0; v < left.size(); ++v) {
    int j = left[v].first;
    for (std::size_t r = 0; r < nroot; ++r)
      if (has(u, inst.shift[j][r])) adj[v].push_back(static_cast<int>(r));
    if (has(u, j))
      for (std::size_t z = 0; z < nzero; ++z) adj[v].push_back(static_cast<int>(nroot + z));
  }
  auto m = max_matching(left.size(), nroot + nzero, adj);
  MatchingWitness w;
  for (std::size_t v = 0; v < left.size(); ++v) {
    if (m[v] < 0) return std::nullopt;
    MatchPair p{left[v].first, left[v].second, -1, -1};
    if (static_cast<std::size_t>(m[v]) < nroot) p.root_slot = m[v];
    else p.zero_slot = m[v] - static_cast<int>(nroot);
    w.pairs.push_back(p);
  }
  return w;
}

std::optional<MatchingWitness> matching_parabolic(const PvsInstance& inst, Mask u, ParabolicIndex s) {
  std::vector<std::pair<int, int>> left;
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j)
    if (!has(u, static_cast<int>(j)))
      for (int c = 0; c < inst.mult[j]; ++c) left.emplace_back(static_cast<int>(j), c);
  std::vector<int> right;
  std::vector<char> levi(inst.g_roots.size(), 0);
  for (int r : levi_slots(inst, s)) levi[r] = 1;
  for (std::size_t p = 0; p < inst.phi_g_plus.size(); ++p)
    if (!levi[2 * p]) right.push_back(static_cast<int>(2 * p));
  std::vector<std::vector<int>> adj(left.size());
  for (std::size_t v = 0; v < left.size(); ++v)
    for (std::size_t r = 0; r < right.size(); ++r)
      if (has(u, inst.shift[left[v].first][right[r]])) adj[v].push_back(static_cast<int>(r));
  auto m = max_matching(left.size(), right.size(), adj);
  MatchingWitness w;
  for (std::size_t v = 0; v < left.size(); ++v) {
    if (m[v] < 0) return std::nullopt;
    w.pairs.push_back({left[v].first, left[v].second, right[m[v]], -1});
  }
  return w;
}

Envelope envelope_of(const PvsInstance& inst, Mask u) {
  std::vector<int> simple = inst.g_simple.indices();
  std::vector<QVec> gens = inst.delta0_g();
  std::vector<int> members = mask_indices(u);
  for (int j : members) gens.push_back(inst.psi_v[j]);
  auto a = positive_envelope(lambda_of(inst, u), gens);
  Envelope e;
  std::vector<int> env;
  for (auto k : a) {
    if (k < simple.size()) env.push_back(simple[k]);
    else e.psi_part.push_back(members[k - simple.size()]);
  }
  e.env = ParabolicIndex::of(env);
  return e;
}

ParabolicIndex env_of(const PvsInstance& inst, Mask u) { return envelope_of(inst, u).env; }

std::string to_string(MinsetStatus s) {
  switch (s) {
    case MinsetStatus::Certified:
      return "Certified";
    case MinsetStatus::RefutedLikely:
      return "RefutedLikely";
    case MinsetStatus::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::No:
      return "no";
    case Tri::Yes:
      return "yes";
    case Tri::Unknown:
      return "unknown";
  }
  return "unknown";
}

MinsetResult minset_certify(const PvsInstance& inst, Mask u, int trials, const std::vector<long>& heights,
                            std::uint64_t seed) {
  MinsetResult res;
  if (!inst.oracle || heights.empty() || trials <= 0) return res;
  std::vector<bool> active(inst.slot_count, false);
  for (int j : mask_indices(u))
    for (int c = 0; c < inst.mult[j]; ++c) active[inst.slot_offset[j] + static_cast<std::size_t>(c)] = true;
  for (int t = 0; t < trials; ++t) {
    std::size_t level = std::min(heights.size() - 1, static_cast<std::size_t>(t) * heights.size() /
                                                         static_cast<std::size_t>(trials));
    QVec p = sample_point(active, heights[level], derive_seed(seed, {0x6d696e736574ULL, u, static_cast<std::uint64_t>(t)}));
    ++res.samples;
    auto values = evaluate_frips(*inst.oracle, p);
    if (std::all_of(values.begin(), values.end(), [](const Q& v) { return sgn(v) != 0; })) {
      res.status = MinsetStatus::Certified;
      res.witness = p;
      return res;
    }
  }
  res.status = MinsetStatus::RefutedLikely;
  return res;
}

MinsetResult minset_certify(const PvsInstance& inst, Mask u) {
  return minset_certify(inst, u, inst.caps.trials, inst.caps.heights, inst.seed);
}

namespace {

// Nonnegative integer multiplicities over gens, summing to `count`, with
// sum x_i g_i = target. Gives up after `budget` nodes.
struct IntegralSearch {
  const std::vector<std::vector<long>>& gens;
  std::size_t dim;
  long budget;
  std::vector<int> x;
  std::vector<std::vector<long>> lo, hi;  // per suffix, min/max coordinate
  std::set<std::tuple<std::size_t, long, std::vector<long>>> dead;

  IntegralSearch(const std::vector<std::vector<long>>& g, std::size_t d, long b) : gens(g), dim(d), budget(b) {
    std::size_t n = gens.size();
    lo.assign(n + 1, std::vector<long>(dim, 0));
    hi.assign(n + 1, std::vector<long>(dim, 0));
    for (std::size_t k = 0; k < dim; ++k) {
      lo[n][k] = std::numeric_limits<long>::max();
      hi[n][k] = std::numeric_limits<long>::min();
      for (std::size_t i = n; i-- > 0;) {
        lo[i][k] = std::min(lo[i + 1][k], gens[i][k]);
        hi[i][k] = std::max(hi[i + 1][k], gens[i][k]);
      }
    }
    x.assign(n, 0);
  }

  // -1 gave up, 0 none, 1 found
  int run(std::size_t i, long count, std::vector<long>& rest) {
    if (--budget < 0) return -1;
    if (count == 0) return std::all_of(rest.begin(), rest.end(), [](long v) { return v == 0; }) ? 1 : 0;
    if (i == gens.size()) return 0;
    for (std::size_t k = 0; k < dim; ++k)
      if (rest[k] < count * lo[i][k] || rest[k] > count * hi[i][k]) return 0;
    auto key = std::make_tuple(i, count, rest);
    if (dead.count(key)) return 0;
    for (long c = count; c >= 0; --c) {
      for (std::size_t k = 0; k < dim; ++k) rest[k] -= c * gens[i][k];
      x[i] = static_cast<int>(c);
      int r = run(i + 1, count - c, rest);
      for (std::size_t k = 0; k < dim; ++k) rest[k] += c * gens[i][k];
      if (r != 0) return r;
    }
    x[i] = 0;
    dead.insert(key);
    return 0;
  }
};

}  // namespace

std::vector<FundamentalCheck> fundamental_cone_check(const PvsInstance& inst, Mask u) {
  std::vector<int> members = mask_indices(u);
  std::vector<QVec> gens;
  for (int j : members) gens.push_back(inst.psi_v[j]);
  std::vector<int> degrees;
  if (inst.oracle && frip_count(*inst.oracle) == inst.fund_chars.size())
    for (std::size_t i = 0; i < inst.fund_chars.size(); ++i)
      degrees.push_back(frip_degree(*inst.oracle, i, inst.seed));
  std::vector<FundamentalCheck> out;
  for (std::size_t i = 0; i < inst.fund_chars.size(); ++i) {
    FundamentalCheck fc;
    fc.chi = inst.fund_chars[i];
    auto cm = cone_membership(fc.chi, gens);
    fc.rational_ok = cm.member;
    if (cm.member) {
      fc.rational_witness = cm.coefficients;
      for (auto k : positive_envelope(fc.chi, gens)) fc.envelope.push_back(members[k]);
    }
    bool integral_data = std::all_of(gens.begin(), gens.end(), [](const QVec& g) {
      return std::all_of(g.begin(), g.end(), [](const Q& q) { return q.get_den() == 1; });
    }) && std::all_of(fc.chi.begin(), fc.chi.end(), [](const Q& q) { return q.get_den() == 1; });
    if (!cm.member) {
      fc.integral_ok = false;
    } else if (integral_data) {
      std::vector<long> counts;
      if (!degrees.empty()) {
        counts.push_back(degrees[i]);
      } else {
        Q sum = 0;
        for (const auto& c : cm.coefficients) sum += c;
        Z ceil_sum = (sum.get_num() + sum.get_den() - 1) / sum.get_den();
        for (long c = 1; c <= 2 * ceil_sum.get_si(); ++c) counts.push_back(c);
      }
      std::vector<std::vector<long>> g;
      for (const auto& v : gens) g.push_back(to_longs(v));
      std::vector<long> target = to_longs(fc.chi);
      bool gave_up = false;
      for (long c : counts) {
        IntegralSearch search(g, inst.datum.ambient_dim, 2000000);
        std::vector<long> rest = target;
        int r = search.run(0, c, rest);
        if (r == 1) {
          fc.integral_ok = true;
          fc.integral_witness = search.x;
          break;
        }
        if (r < 0) gave_up = true;
      }
      if (!fc.integral_ok && !gave_up) fc.integral_ok = false;
    }
    out.push_back(fc);
  }
  return out;
}

ExceptionalResult is_exceptional(const PvsInstance& inst, Mask u, ParabolicIndex stab) {
  ExceptionalResult res;
  std::size_t dim = inst.datum.ambient_dim;
  std::vector<QVec> ann = inst.xstar_g;
  for (int i : stab.indices()) ann.push_back(inst.datum.simple_roots[i]);
  std::vector<QVec> k = kernel_basis(ann, dim);
  if (k.empty()) return res;
  std::vector<int> members = mask_indices(u);

  auto zero_set = [&](const std::vector<QVec>& flat) {
    Mask z = 0;
    for (int j : members) {
      bool vanish = true;
      for (const auto& f : flat)
        if (sgn(dot(inst.psi_v[j], f)) != 0) vanish = false;
      if (vanish) z |= Mask{1} << j;
    }
    return z;
  };
  std::set<Mask> seen;
  std::vector<std::pair<Mask, QVec>> leaves;
  std::function<void(const std::vector<QVec>&)> visit = [&](const std::vector<QVec>& flat) {
    Mask z = zero_set(flat);
    if (!seen.insert(z).second) return;
    ++res.flats_visited;
    bool has_child = false;
    for (int j : members) {
      if (has(z, j)) continue;
      // flat ∩ beta_j^perp, in coordinates over the flat basis.
      QVec pairing;
      for (const auto& f : flat) pairing.push_back(dot(inst.psi_v[j], f));
      auto coeffs = kernel_basis({pairing}, flat.size());
      if (coeffs.empty()) continue;
      std::vector<QVec> sub;
      for (const auto& c : coeffs) {
        QVec v = zero_vec(dim);
        for (std::size_t t = 0; t < flat.size(); ++t) axpy(v, c[t], flat[t]);
        sub.push_back(primitive(v));
      }
      has_child = true;
      visit(sub);
    }
    if (!has_child) leaves.emplace_back(z, flat.front());
  };
  visit(k);
  std::sort(leaves.begin(), leaves.end(), [](const auto& a, const auto& b) {
    if (mask_size(a.first) != mask_size(b.first)) return mask_size(a.first) > mask_size(b.first);
    return a.first < b.first;
  });
  bool unknown = false;
  for (const auto& [z, x] : leaves) {
    auto m = minset_certify(inst, z);
    if (m.status == MinsetStatus::Certified) {
      res.status = Tri::Yes;
      res.witness = z;
      res.kernel_vector = x;
      return res;
    }
    if (m.status == MinsetStatus::Unknown) unknown = true;
  }
  res.status = unknown ? Tri::Unknown : Tri::No;
  return res;
}

ConvergenceCertificate convergence_certificate(const PvsInstance& inst, Mask u, const std::vector<Q>& mu_coeffs) {
  if (inst.fund_chars.empty()) throw InvalidMu("no fundamental characters to build mu from");
  if (mu_coeffs.size() != inst.fund_chars.size())
    throw InvalidMu("mu needs " + std::to_string(inst.fund_chars.size()) + " coefficients, got " +
                    std::to_string(mu_coeffs.size()));
  std::size_t dim = inst.datum.ambient_dim;
  ConvergenceCertificate cert;
  cert.mu = zero_vec(dim);
  for (std::size_t i = 0; i < mu_coeffs.size(); ++i) {
    if (sgn(mu_coeffs[i]) <= 0) throw InvalidMu("mu coefficients must be strictly positive");
    axpy(cert.mu, mu_coeffs[i], inst.fund_chars[i]);
  }
  std::vector<QVec> delta = inst.delta0_g();
  std::vector<QVec> with_sigma = delta;
  with_sigma.insert(with_sigma.end(), inst.fund_chars.begin(), inst.fund_chars.end());
  std::vector<QVec> ker_q = kernel_basis(with_sigma, dim);
  std::vector<QVec> ell_eqs = delta;
  for (const auto& kq : ker_q) {
    QVec g = zero_vec(dim);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b) g[a] += inst.datum.cochar_gram[a][b] * kq[b];
    ell_eqs.push_back(g);
  }
  cert.ell_basis = kernel_basis(ell_eqs, dim);
  for (int i : inst.g_simple.indices()) cert.w_basis.push_back(inst.datum.simple_coroots[i]);
  cert.w_basis.insert(cert.w_basis.end(), cert.ell_basis.begin(), cert.ell_basis.end());

  ConeDescription cone;
  cone.ambient_dim = dim;
  cone.inequalities = delta;
  for (int j : mask_indices(u)) cone.inequalities.push_back(inst.psi_v[j]);
  cone.subspace_basis = cert.w_basis;
  cert.functional = add(lambda_of(inst, u), cert.mu);
  cert.positivity = positive_on_cone(cert.functional, cone);
  cert.positive = cert.positivity.positive;
  return cert;
}

Face face_of_cone(const PvsInstance& inst, Mask u) {
  ConeDescription cone;
  cone.ambient_dim = inst.datum.ambient_dim;
  cone.inequalities = inst.delta0_g();
  for (int j : mask_indices(u)) cone.inequalities.push_back(inst.psi_v[j]);
  RaySet rs = extreme_rays(cone);
  QVec l = lambda_of(inst, u);
  Face f;
  for (const auto& r : rs.rays)
    if (sgn(dot(l, r)) == 0) f.rays.push_back(r);
  for (const auto& r : rs.lineality)
    if (sgn(dot(l, r)) == 0) f.lineality.push_back(r);
  return f;
}

SpecialReport is_special(const PvsInstance& inst, Mask u) {
  SpecialReport r;
  r.members = u;
  auto stab = stabilizer_of(inst, u);
  r.p0_stable = stab.has_value();
  if (!stab) return r;
  r.stab = *stab;
  int complement = 0;
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j)
    if (!has(u, static_cast<int>(j))) complement += inst.mult[j];
  std::size_t levi = levi_slots(inst, r.stab).size() / 2;
  r.dimension_match = static_cast<std::size_t>(complement) == inst.phi_g_plus.size() - levi;
  if (!r.dimension_match) return r;
  r.matching = matching_parabolic(inst, u, r.stab);
  if (!r.matching) return r;

  QVec rhs = zero_vec(inst.datum.ambient_dim);
  for (const auto& p : r.matching->pairs) rhs = add(rhs, add(inst.psi_v[p.weight], inst.g_roots[p.root_slot]));
  for (int slot : levi_slots(inst, r.stab))
    if (slot % 2 == 0) rhs = add(rhs, inst.g_roots[slot]);
  if (rhs != lambda_of(inst, u)) throw InvariantViolation("lambda identity fails for a matched subspace");
  r.lambda_identity_checked = true;

  try {
    r.env = env_of(inst, u);
  } catch (const NotInCone&) {
    r.env.reset();
  }
  auto m = minset_certify(inst, u);
  r.minset = m.status;
  r.minset_tested = true;
  r.special = m.status == MinsetStatus::Certified ? Tri::Yes
              : m.status == MinsetStatus::RefutedLikely ? Tri::No
                                                          : Tri::Unknown;
  return r;
}

void sort_masks(std::vector<Mask>& masks) {
  std::sort(masks.begin(), masks.end(), [](Mask a, Mask b) {
    if (mask_size(a) != mask_size(b)) return mask_size(a) > mask_size(b);
    return mask_indices(a) < mask_indices(b);
  });
}

std::vector<Mask> p0_stable_subsets(const PvsInstance& inst) {
  std::size_t n = inst.psi_v.size();
  if (n > inst.caps.max_weights)
    throw CapExceeded("psi_v has " + std::to_string(n) + " weights, the cap is " +
                      std::to_string(inst.caps.max_weights));
  std::vector<Mask> up(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t p = 0; p < inst.phi_g_plus.size(); ++p) {
      int k = inst.shift[j][2 * p];
      if (k >= 0) up[j] |= Mask{1} << k;
    }
  // Process a weight only after everything above it.
  std::vector<int> order;
  Mask placed = 0;
  while (order.size() < n) {
    bool progress = false;
    for (std::size_t j = 0; j < n; ++j)
      if (!has(placed, static_cast<int>(j)) && (up[j] & ~placed) == 0) {
        order.push_back(static_cast<int>(j));
        placed |= Mask{1} << j;
        progress = true;
      }
    if (!progress) throw InvariantViolation("weight poset has a cycle");
  }
  std::vector<Mask> out;
  const std::size_t limit = std::size_t{1} << 22;
  std::function<void(std::size_t, Mask)> rec = [&](std::size_t pos, Mask cur) {
    if (pos == n) {
      if (out.size() >= limit) throw CapExceeded("more than 2^22 P0-stable subsets");
      out.push_back(cur);
      return;
    }
    int j = order[pos];
    rec(pos + 1, cur);
    if ((up[j] & ~cur) == 0) rec(pos + 1, cur | (Mask{1} << j));
  };
  rec(0, 0);
  sort_masks(out);
  return out;
}

namespace {

std::vector<SpecialReport> collect(std::vector<std::optional<SpecialReport>>& slots) {
  std::vector<SpecialReport> out;
  for (auto& s : slots)
    if (s && s->special != Tri::No) out.push_back(std::move(*s));
  return out;
}

}  // namespace

std::vector<SpecialReport> enumerate_spcl_serial(const PvsInstance& inst) {
  auto candidates = p0_stable_subsets(inst);
  std::vector<std::optional<SpecialReport>> slots(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) slots[i] = is_special(inst, candidates[i]);
  return collect(slots);
}

std::vector<SpecialReport> enumerate_spcl(const PvsInstance& inst, const EnumerateOptions& opts) {
  if (opts.serial) return enumerate_spcl_serial(inst);
  auto candidates = p0_stable_subsets(inst);
  std::vector<std::optional<SpecialReport>> slots(candidates.size());
  std::vector<std::exception_ptr> errors(candidates.size());
  long count = static_cast<long>(candidates.size());
  int threads = resolve_threads(opts.jobs);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads != 1)
  for (long i = 0; i < count; ++i) {
    try {
      slots[i] = is_special(inst, candidates[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return collect(slots);
}

std::vector<std::pair<int, int>> hasse_edges(const std::vector<Mask>& spaces) {
  std::vector<std::pair<int, int>> edges;
  auto below = [](Mask a, Mask b) { return a != b && (a & ~b) == 0; };
  for (std::size_t c = 0; c < spaces.size(); ++c)
    for (std::size_t p = 0; p < spaces.size(); ++p) {
      if (!below(spaces[c], spaces[p])) continue;
      bool cover = true;
      for (std::size_t m = 0; m < spaces.size() && cover; ++m)
        if (below(spaces[c], spaces[m]) && below(spaces[m], spaces[p])) cover = false;
      if (cover) edges.emplace_back(static_cast<int>(c), static_cast<int>(p));
    }
  return edges;
}

CfDecomposition cf_decompose(const PvsInstance& inst, const std::vector<Mask>* spcl) {
  CfDecomposition cf;
  std::size_t n = inst.psi_v.size();
  if (!inst.components.empty()) {
    cf.declared = true;
    Mask seen = 0;
    for (const auto& comp : inst.components) {
      Mask m = mask_of(comp);
      if (m & seen) cf.disjoint = false;
      seen |= m;
      cf.components.push_back(m);
    }
    if (!cf.disjoint) throw InvalidInstance("components: weight sets overlap");
    if (seen != inst.full_mask()) throw InvalidInstance("components: do not cover psi_v");
  } else {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (std::size_t j = 0; j < n; ++j)
      for (int k : inst.shift[j])
        if (k >= 0) parent[find(static_cast<int>(j))] = find(k);
    std::map<int, Mask> groups;
    for (std::size_t j = 0; j < n; ++j) groups[find(static_cast<int>(j))] |= Mask{1} << j;
    for (const auto& [root, m] : groups) cf.components.push_back(m);
    std::sort(cf.components.begin(), cf.components.end(),
              [](Mask a, Mask b) { return mask_indices(a) < mask_indices(b); });
  }
  std::vector<QVec> a_g = kernel_basis(inst.delta0_g(), inst.datum.ambient_dim);
  for (std::size_t c = 0; c < cf.components.size(); ++c) {
    std::optional<QVec> omega;
    for (int j : mask_indices(cf.components[c])) {
      QVec w;
      for (const auto& b : a_g) w.push_back(dot(inst.psi_v[j], b));
      if (!omega) omega = w;
      else if (*omega != w)
        throw InvalidInstance("components[" + std::to_string(c) + "]: weights restrict to different characters of a_G");
    }
    cf.omegas.push_back(omega.value_or(QVec{}));
  }
  cf.independent = cf.omegas.empty() || a_g.empty()
                       ? cf.omegas.empty()
                       : rank_of_span(cf.omegas) == static_cast<int>(cf.omegas.size());
  if (spcl) cf.simple_case = spcl->size() == 1 && spcl->front() == inst.full_mask();
  return cf;
}

}  // namespace pvsa
