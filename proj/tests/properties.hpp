#pragma once

// Randomized property checks shared by the unit tests and the acceptance
// runner. Each check reports how many cases it examined and how many failed.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "golden.hpp"
#include "oracle/brute.hpp"
#include "pvsa/dktype.hpp"
#include "pvsa/exactla.hpp"
#include "pvsa/pvscore.hpp"
#include "pvsa/random.hpp"
#include "pvsa/relinv.hpp"

namespace props {

using namespace pvsa;

struct Tally {
  std::string name;
  long cases = 0;
  long violations = 0;
  std::vector<std::string> samples;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    ++violations;
    if (samples.size() < 5) samples.push_back(what);
  }
  bool passed(long min_cases = 100) const { return violations == 0 && cases >= min_cases; }
  std::string summary() const {
    std::string s = name + ": " + std::to_string(cases) + " cases, " + std::to_string(violations) + " violations";
    for (const auto& m : samples) s += "\n    " + m;
    return s;
  }
};

inline bool has(Mask m, std::size_t j) { return (m >> j) & 1U; }

inline Mask random_mask(std::mt19937_64& g, std::size_t n, long keep_percent) {
  Mask m = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (draw_uniform(g, 1, 100) <= keep_percent) m |= Mask{1} << j;
  return m;
}

// Positive roots of the ambient datum supported on the simple roots of G,
// read off from the root coefficients.
inline std::vector<QVec> g_positive_roots(const PvsInstance& inst) {
  std::vector<QVec> out;
  for (std::size_t k = 0; k < inst.datum.positive_roots.size(); ++k) {
    bool inside = true;
    const auto& c = inst.datum.root_coeffs[k];
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0 && !inst.g_simple.contains(static_cast<int>(i))) inside = false;
    if (inside) out.push_back(inst.datum.positive_roots[k]);
  }
  return out;
}

inline bool supported_on(const PvsInstance& inst, const QVec& root, ParabolicIndex levi) {
  auto it = inst.datum.index.find(root);
  if (it == inst.datum.index.end()) return false;
  const auto& c = inst.datum.root_coeffs[static_cast<std::size_t>(std::abs(it->second) - 1)];
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0 && !levi.contains(static_cast<int>(i))) return false;
  return true;
}

inline int find_weight(const PvsInstance& inst, const QVec& v) {
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j)
    if (inst.psi_v[j] == v) return static_cast<int>(j);
  return -1;
}

inline Mask closure_by_sums(const PvsInstance& inst, Mask u, const std::vector<QVec>& roots) {
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t k = 0; k < inst.psi_v.size(); ++k) {
      if (has(u, k)) continue;
      for (std::size_t j = 0; j < inst.psi_v.size() && !has(u, k); ++j) {
        if (!has(u, j)) continue;
        for (const auto& r : roots)
          if (add(inst.psi_v[j], r) == inst.psi_v[k]) {
            u |= Mask{1} << k;
            grew = true;
            break;
          }
      }
    }
  }
  return u;
}

// DK instances with a built-in invariant and 1..12 weights, over every
// {0,2} labelling of a handful of small types.
inline std::vector<PvsInstance> small_dk_pool() {
  std::vector<PvsInstance> pool;
  for (const char* type : {"G2", "B2", "B3", "C3", "D4", "B4", "C4", "D5", "GL3", "GL4", "GL5", "GL6", "GL7"}) {
    RootDatum d = build_root_datum(type);
    std::size_t r = d.rank();
    for (std::size_t bits = 1; bits < (std::size_t{1} << r); ++bits) {
      std::vector<int> labels(r);
      for (std::size_t i = 0; i < r; ++i) labels[i] = (bits >> i) & 1U ? 2 : 0;
      PvsInstance inst = build_dk_pvs(d, labels);
      if (!inst.oracle || inst.psi_v.empty() || inst.psi_v.size() > 12) continue;
      inst.name = std::string(type) + " " + format_vector(from_ints({labels.begin(), labels.end()}));
      pool.push_back(std::move(inst));
    }
  }
  pool.push_back(golden::f4());
  pool.back().name = "F4 (0,2,0,0)";
  return pool;
}

inline Tally closure_laws(const std::vector<PvsInstance>& pool, std::uint64_t seed) {
  Tally t{"star closure is extensive, monotone and idempotent"};
  std::mt19937_64 g(derive_seed(seed, {101}));
  for (int trial = 0; trial < 400; ++trial) {
    const PvsInstance& inst = pool[static_cast<std::size_t>(trial) % pool.size()];
    std::size_t n = inst.psi_v.size();
    std::vector<int> levi;
    for (int i : inst.g_simple.indices())
      if (draw_uniform(g, 0, 1)) levi.push_back(i);
    ParabolicIndex l = ParabolicIndex::of(levi);
    bool parabolic = draw_uniform(g, 0, 1) == 1;
    std::vector<int> slots = parabolic ? parabolic_slots(inst, l) : levi_slots(inst, l);
    std::vector<QVec> roots;
    for (const auto& a : g_positive_roots(inst)) {
      bool in_levi = supported_on(inst, a, l);
      if (parabolic || in_levi) roots.push_back(a);
      if (in_levi) roots.push_back(neg(a));
    }
    Mask u = random_mask(g, n, 30);
    Mask bigger = u | random_mask(g, n, 30);
    Mask c = star_closure(inst, u, slots);
    std::string where = inst.name + " u=" + std::to_string(u);
    t.check(c == closure_by_sums(inst, u, roots), where + ": differs from the fixpoint by root sums");
    t.check((c & u) == u, where + ": not extensive");
    t.check(star_closure(inst, c, slots) == c, where + ": not idempotent");
    Mask cb = star_closure(inst, bigger, slots);
    t.check((c & cb) == c, where + ": not monotone");
    ++t.cases;
  }
  return t;
}

// Bipartite graph of the weight slots outside U against Phi_{N_S}, built from
// root vectors; returns the matched root per slot.
inline std::optional<std::vector<QVec>> brute_parabolic_matching(const PvsInstance& inst, Mask u, ParabolicIndex s,
                                                                 std::vector<int>* slot_weights) {
  std::vector<QVec> nil;
  for (const auto& a : g_positive_roots(inst))
    if (!supported_on(inst, a, s)) nil.push_back(a);
  std::vector<std::vector<int>> adj;
  slot_weights->clear();
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j) {
    if (has(u, j)) continue;
    for (int c = 0; c < inst.mult[j]; ++c) {
      slot_weights->push_back(static_cast<int>(j));
      std::vector<int> row;
      for (std::size_t r = 0; r < nil.size(); ++r) {
        int k = find_weight(inst, add(inst.psi_v[j], nil[r]));
        if (k >= 0 && has(u, static_cast<std::size_t>(k))) row.push_back(static_cast<int>(r));
      }
      adj.push_back(row);
    }
  }
  auto pick = oracle::brute_assignment(adj, static_cast<int>(nil.size()));
  if (!pick) return std::nullopt;
  std::vector<QVec> out;
  for (int r : *pick) out.push_back(nil[static_cast<std::size_t>(r)]);
  return out;
}

// For every enumerated special U: lambda(U) equals the matched sum plus the
// Levi half, and Stab(U) lies in Env(U).
inline Tally lambda_identity(const std::vector<PvsInstance>& pool) {
  Tally t{"lambda identity on enumerated specials"};
  for (const auto& inst : pool) {
    QVec delta0 = zero_vec(inst.datum.ambient_dim);
    for (const auto& a : g_positive_roots(inst)) delta0 = add(delta0, a);
    for (const auto& rep : enumerate_spcl(inst)) {
      if (rep.special != Tri::Yes) continue;
      ++t.cases;
      std::string where = inst.name + " u=" + std::to_string(rep.members);
      QVec lambda = delta0;
      for (std::size_t j = 0; j < inst.psi_v.size(); ++j)
        if (!has(rep.members, j)) axpy(lambda, Q(inst.mult[j]), inst.psi_v[j]);
      t.check(lambda == lambda_of(inst, rep.members), where + ": lambda differs from the direct sum");
      std::vector<int> slots;
      auto iota = brute_parabolic_matching(inst, rep.members, rep.stab, &slots);
      t.check(iota.has_value(), where + ": no perfect matching into the nilradical");
      if (!iota) continue;
      QVec rhs = zero_vec(inst.datum.ambient_dim);
      for (std::size_t v = 0; v < slots.size(); ++v)
        rhs = add(rhs, add(inst.psi_v[static_cast<std::size_t>(slots[v])], (*iota)[v]));
      std::size_t nil = 0;
      for (const auto& a : g_positive_roots(inst)) {
        if (supported_on(inst, a, rep.stab)) rhs = add(rhs, a);
        else ++nil;
      }
      t.check(slots.size() == nil, where + ": codimension differs from the nilradical size");
      t.check(rhs == lambda, where + ": lambda identity fails");
      t.check(rep.lambda_identity_checked, where + ": report did not record the identity");
      t.check(rep.env.has_value() && rep.stab.subset_of(*rep.env), where + ": Stab not inside Env");
    }
  }
  return t;
}

inline Tally e6_intersections(const PvsInstance& inst, const std::vector<Mask>& spcl) {
  Tally t{"intersections of special subspaces in the E6 instance"};
  for (std::size_t a = 0; a < spcl.size(); ++a)
    for (std::size_t b = a + 1; b < spcl.size(); ++b) {
      Mask u = spcl[a] & spcl[b];
      if (minset_certify(inst, u).status != MinsetStatus::Certified) continue;
      ++t.cases;
      std::string where = std::to_string(spcl[a]) + " & " + std::to_string(spcl[b]);
      SpecialReport r = is_special(inst, u);
      t.check(r.special == Tri::Yes, where + ": intersection is not special");
      auto sa = stabilizer_of(inst, spcl[a]), sb = stabilizer_of(inst, spcl[b]);
      std::vector<int> both;
      for (int i : sa->indices())
        if (sb->contains(i)) both.push_back(i);
      t.check(r.stab == ParabolicIndex::of(both), where + ": Stab is not the intersection of the stabilizers");
      t.check(std::find(spcl.begin(), spcl.end(), u) != spcl.end(), where + ": missing from the enumeration");
    }
  return t;
}

inline Tally e6_admsets(const PvsInstance& inst, std::uint64_t seed) {
  Tally t{"Env(U) star U in the E6 instance"};
  std::vector<Mask> subjects = p0_stable_subsets(inst);
  std::mt19937_64 g(derive_seed(seed, {102}));
  for (int k = 0; k < 300; ++k) subjects.push_back(random_mask(g, inst.psi_v.size(), 85));
  for (Mask u : subjects) {
    if (minset_certify(inst, u).status != MinsetStatus::Certified) continue;
    ++t.cases;
    std::string where = "u=" + std::to_string(u);
    ParabolicIndex env;
    try {
      env = env_of(inst, u);
    } catch (const NotInCone&) {
      t.check(false, where + ": lambda(U) outside the cone");
      continue;
    }
    Mask tilde = star_closure(inst, u, parabolic_slots(inst, env));
    SpecialReport r = is_special(inst, tilde);
    t.check(r.special == Tri::Yes, where + ": Env(U) star U is not special");
    t.check(r.stab == env, where + ": Stab differs from Env(U)");
    t.check(r.env.has_value() && *r.env == env, where + ": Env of the closure differs from Env(U)");
  }
  return t;
}

inline void t_check_witness(Tally& t, const ConeMembership& cm, const QVec& target, const std::vector<QVec>& gens,
                            const std::string& where) {
  t.check(cm.member, where + ": not in the cone");
  if (!cm.member) return;
  QVec sum = zero_vec(target.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    t.check(cm.coefficients[i] >= 0, where + ": negative coefficient");
    axpy(sum, cm.coefficients[i], gens[i]);
  }
  t.check(sum == target, where + ": witness does not reproduce the target");
}

// Consequences of U meeting the regular set, on random certified subsets.
struct MinsetTallies {
  Tally cone{"lambda(U) in the cone of Psi_U and Delta_0"};
  Tally matching{"full matching for certified subspaces"};
};

inline MinsetTallies minset_consequences(const std::vector<PvsInstance>& pool, std::uint64_t seed) {
  MinsetTallies out;
  std::mt19937_64 g(derive_seed(seed, {103}));
  for (int trial = 0; trial < 600; ++trial) {
    const PvsInstance& inst = pool[static_cast<std::size_t>(trial) % pool.size()];
    std::size_t n = inst.psi_v.size();
    Mask u = random_mask(g, n, 40 + draw_uniform(g, 0, 55));
    if (minset_certify(inst, u).status != MinsetStatus::Certified) continue;
    std::string where = inst.name + " u=" + std::to_string(u);

    std::vector<QVec> gens;
    for (std::size_t j = 0; j < n; ++j)
      if (has(u, j)) gens.push_back(inst.psi_v[j]);
    for (int i : inst.g_simple.indices()) gens.push_back(inst.datum.simple_roots[static_cast<std::size_t>(i)]);
    QVec delta0 = zero_vec(inst.datum.ambient_dim);
    for (const auto& a : g_positive_roots(inst)) delta0 = add(delta0, a);
    // lambda(U) and a random partial sum over the other weights.
    for (int pass = 0; pass < 2; ++pass) {
      QVec target = delta0;
      for (std::size_t j = 0; j < n; ++j) {
        bool take = pass == 0 ? !has(u, j) : draw_uniform(g, 0, 1) == 1;
        if (take) axpy(target, Q(inst.mult[j]), inst.psi_v[j]);
      }
      ++out.cone.cases;
      auto cm = cone_membership(target, gens);
      t_check_witness(out.cone, cm, target, gens, where);
      if (gens.size() <= 12)
        out.cone.check(oracle::caratheodory_member(target, gens), where + ": Caratheodory finds no representation");
    }
    try {
      env_of(inst, u);
    } catch (const NotInCone&) {
      out.cone.check(false, where + ": env_of raised NotInCone");
    }

    ++out.matching.cases;
    auto m = matching_full(inst, u);
    out.matching.check(m.has_value(), where + ": no full matching");
    std::vector<QVec> roots;
    for (const auto& a : g_positive_roots(inst)) {
      roots.push_back(a);
      roots.push_back(neg(a));
    }
    std::size_t zeros = inst.datum.ambient_dim;
    std::vector<std::vector<int>> adj;
    for (std::size_t j = 0; j < n; ++j)
      for (int c = 0; c < inst.mult[j]; ++c) {
        std::vector<int> row;
        for (std::size_t r = 0; r < roots.size(); ++r) {
          int k = find_weight(inst, add(inst.psi_v[j], roots[r]));
          if (k >= 0 && has(u, static_cast<std::size_t>(k))) row.push_back(static_cast<int>(r));
        }
        if (has(u, j))
          for (std::size_t z = 0; z < zeros; ++z) row.push_back(static_cast<int>(roots.size() + z));
        adj.push_back(row);
      }
    out.matching.check(oracle::brute_assignment(adj, static_cast<int>(roots.size() + zeros)).has_value(),
                       where + ": brute force finds no full matching");
    if (!m) continue;
    std::set<int> used_roots, used_zero;
    for (const auto& p : m->pairs) {
      const QVec& beta = inst.psi_v[static_cast<std::size_t>(p.weight)];
      if (p.root_slot >= 0) {
        out.matching.check(used_roots.insert(p.root_slot).second, where + ": root slot used twice");
        int k = find_weight(inst, add(beta, inst.g_roots[static_cast<std::size_t>(p.root_slot)]));
        out.matching.check(k >= 0 && has(u, static_cast<std::size_t>(k)), where + ": matched sum not in Psi_U");
      } else {
        out.matching.check(used_zero.insert(p.zero_slot).second, where + ": zero slot used twice");
        out.matching.check(has(u, static_cast<std::size_t>(p.weight)), where + ": zero slot on a weight outside U");
      }
    }
    out.matching.check(m->pairs.size() == inst.slot_count, where + ": matching does not cover every slot");
  }
  return out;
}

inline QVec random_qvec(std::mt19937_64& g, std::size_t n, long lo, long hi) {
  QVec v(n);
  for (auto& x : v) x = draw_uniform(g, lo, hi);
  return v;
}

// Any generator in the span of the envelope belongs to it.
inline Tally envelope_allin(std::uint64_t seed) {
  Tally t{"positive envelope contains every generator in its span"};
  std::mt19937_64 g(derive_seed(seed, {104}));
  while (t.cases < 200) {
    std::size_t dim = static_cast<std::size_t>(draw_uniform(g, 2, 5));
    std::size_t count = static_cast<std::size_t>(draw_uniform(g, 2, 8));
    std::vector<QVec> gens;
    for (std::size_t i = 0; i < count; ++i) gens.push_back(random_qvec(g, dim, -2, 2));
    // Force some dependencies so the property has something to bite on.
    if (count >= 3 && draw_uniform(g, 0, 1)) gens[count - 1] = add(gens[0], scale(Q(-1), gens[1]));
    QVec target = zero_vec(dim);
    for (const auto& v : gens)
      if (draw_uniform(g, 0, 2)) axpy(target, Q(draw_uniform(g, 1, 3)), v);
    ++t.cases;
    std::string where = "case " + std::to_string(t.cases);
    auto env = positive_envelope(target, gens);
    std::set<std::size_t> in(env.begin(), env.end());
    std::vector<QVec> span;
    for (auto i : in) span.push_back(gens[i]);
    int r = oracle::rank_of(span);
    for (std::size_t j = 0; j < count; ++j) {
      if (in.count(j)) continue;
      auto with = span;
      with.push_back(gens[j]);
      t.check(oracle::rank_of(with) > r, where + ": generator " + std::to_string(j) + " is in the span but left out");
    }
    auto expect = oracle::envelope_oracle(target, gens);
    t.check(expect.has_value() && *expect == in, where + ": envelope differs from the vertex/circuit oracle");
    // Order of the generators does not matter.
    std::vector<std::size_t> perm(count);
    for (std::size_t i = 0; i < count; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), g);
    std::vector<QVec> shuffled;
    for (auto p : perm) shuffled.push_back(gens[p]);
    std::set<std::size_t> back;
    for (auto i : positive_envelope(target, shuffled)) back.insert(perm[i]);
    t.check(back == in, where + ": envelope depends on generator order");
  }
  return t;
}

inline Tally ray_reconstruction(std::uint64_t seed) {
  Tally t{"extreme rays reconstruct their cone"};
  std::mt19937_64 g(derive_seed(seed, {105}));
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t dim = static_cast<std::size_t>(draw_uniform(g, 2, 4));
    ConeDescription cone;
    cone.ambient_dim = dim;
    int count = static_cast<int>(draw_uniform(g, 1, 6));
    for (int i = 0; i < count; ++i) cone.inequalities.push_back(random_qvec(g, dim, -3, 3));
    if (dim >= 3 && draw_uniform(g, 0, 2) == 0)
      cone.subspace_basis = std::vector<QVec>{random_qvec(g, dim, -2, 2), random_qvec(g, dim, -2, 2)};
    ++t.cases;
    std::string where = "case " + std::to_string(trial);
    RaySet rs = extreme_rays(cone);
    std::vector<QVec> gens = rs.rays;
    for (const auto& l : rs.lineality) {
      t.check(cone_contains(cone, l) && cone_contains(cone, neg(l)), where + ": lineality vector outside the cone");
      gens.push_back(l);
      gens.push_back(neg(l));
    }
    for (const auto& r : rs.rays) {
      t.check(cone_contains(cone, r), where + ": ray outside the cone");
      t.check(!is_zero(r) && primitive(r) == r, where + ": ray not primitive");
    }
    for (std::size_t a = 0; a < rs.rays.size(); ++a)
      for (std::size_t b = a + 1; b < rs.rays.size(); ++b)
        t.check(oracle::rank_of({rs.rays[a], rs.rays[b]}) == 2, where + ": proportional rays");
    for (int s = 0; s < 6; ++s) {
      // Nonnegative combinations of the rays stay inside.
      QVec x = zero_vec(dim);
      for (const auto& r : gens) axpy(x, Q(draw_uniform(g, 0, 3)), r);
      t.check(cone_contains(cone, x), where + ": combination of rays rejected");
      // Points of the cone are combinations of the rays.
      QVec y = random_qvec(g, dim, -4, 4);
      bool inside = cone_contains(cone, y);
      bool in_sub = !cone.subspace_basis || oracle::rank_of(*cone.subspace_basis) ==
                                                oracle::rank_of([&] {
                                                  auto b = *cone.subspace_basis;
                                                  b.push_back(y);
                                                  return b;
                                                }());
      bool by_ineq = in_sub;
      for (const auto& a : cone.inequalities)
        if (dot(a, y) < 0) by_ineq = false;
      t.check(inside == by_ineq, where + ": membership disagrees with the inequalities");
      if (inside) t.check(oracle::caratheodory_member(y, gens), where + ": point not generated by the rays");
    }
    QVec f = random_qvec(g, dim, -3, 3);
    Positivity p = positive_on_cone(f, cone);
    if (!p.positive) {
      t.check(p.witness.has_value(), where + ": failure without witness");
      if (p.witness) {
        t.check(!is_zero(*p.witness) && cone_contains(cone, *p.witness), where + ": witness outside the cone");
        if (!p.witness_in_lineality) t.check(dot(f, *p.witness) <= 0, where + ": witness pairs positively");
      }
    } else {
      for (const auto& r : rs.rays) t.check(dot(f, r) > 0, where + ": positive verdict but a ray pairs to <= 0");
    }
  }
  return t;
}

// t^chi for a torus element given by its value on each coordinate.
inline Q torus_power(const std::vector<Q>& t, const QVec& chi) {
  Q out = 1;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    if (chi[i] == 0) continue;
    long e = chi[i].get_num().get_si();
    Q base = e > 0 ? t[i] : Q(Q(1) / t[i]);
    for (long k = 0; k < std::abs(e); ++k) out *= base;
  }
  return out;
}

struct OracleInstance {
  std::string name;
  PvsInstance inst;
};

inline std::vector<OracleInstance> oracle_instances() {
  auto dk = [](const char* type, std::vector<int> labels) {
    return build_dk_pvs(build_root_datum(type), labels);
  };
  return {
      {"G2 binary cubics", golden::g2()},
      {"binary quadratics", golden::binary_quadratics()},
      {"GL4 (1,2,1)", golden::gl_chain({1, 2, 1})},
      {"GL7 (2,3,2)", golden::gl_chain({2, 3, 2})},
      {"F4", golden::f4()},
      {"E6", golden::e6()},
      {"D4 skew", dk("D4", {0, 0, 0, 2})},
      {"C3 sp", dk("C3", {0, 2, 0})},
      {"B3 so", dk("B3", {0, 2, 0})},
      {"D4 so", dk("D4", {0, 2, 0, 0})},
  };
}

inline Tally torus_scaling(std::uint64_t seed) {
  Tally t{"relative invariants scale by their characters"};
  std::mt19937_64 g(derive_seed(seed, {106}));
  for (const auto& oi : oracle_instances()) {
    const PvsInstance& inst = oi.inst;
    t.check(inst.oracle.has_value(), oi.name + ": no built-in invariant");
    if (!inst.oracle) continue;
    std::vector<QVec> slot_weights;
    for (std::size_t j = 0; j < inst.psi_v.size(); ++j)
      for (int c = 0; c < inst.mult[j]; ++c) slot_weights.push_back(inst.psi_v[j]);
    for (int trial = 0; trial < 12; ++trial) {
      ++t.cases;
      std::string where = oi.name + " trial " + std::to_string(trial);
      std::vector<Q> torus(inst.datum.ambient_dim);
      for (auto& x : torus) {
        long num = draw_uniform(g, 1, 4) * (draw_uniform(g, 0, 1) ? 1 : -1);
        x = Q(num, draw_uniform(g, 1, 3));
        x.canonicalize();
      }
      QVec p = random_qvec(g, inst.slot_count, -5, 5);
      QVec scaled = p;
      for (std::size_t k = 0; k < scaled.size(); ++k) scaled[k] *= torus_power(torus, slot_weights[k]);
      auto before = evaluate_frips(*inst.oracle, p);
      auto after = evaluate_frips(*inst.oracle, scaled);
      for (std::size_t i = 0; i < before.size(); ++i) {
        QVec chi = frip_weight(*inst.oracle, slot_weights, i, inst.seed);
        t.check(i < inst.fund_chars.size() && chi == inst.fund_chars[i], where + ": character differs from Sigma");
        t.check(after[i] == torus_power(torus, chi) * before[i], where + ": f(t.v) != t^chi f(v)");
      }
    }
  }
  return t;
}

}  // namespace props
