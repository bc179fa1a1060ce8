#include "pvsa/dktype.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <set>

#include "pvsa/exactla.hpp"
#include "pvsa/parallel.hpp"

namespace pvsa {

namespace {

int grade_of(const RootDatum& d, std::size_t k, const std::vector<int>& labels) {
  int g = 0;
  for (std::size_t j = 0; j < d.rank(); ++j) g += d.root_coeffs[k][j] * labels[j];
  return g;
}

void check_labels(const RootDatum& d, const std::vector<int>& labels) {
  if (labels.size() != d.rank())
    throw std::invalid_argument("grading needs " + std::to_string(d.rank()) + " labels, got " +
                                std::to_string(labels.size()));
}

// Weight index per root-coefficient vector.
std::map<std::vector<int>, int> coeff_index(const PvsInstance& inst) {
  std::map<std::vector<int>, int> out;
  const auto& d = inst.datum;
  for (std::size_t j = 0; j < inst.psi_v.size(); ++j) {
    int id = d.root_id(inst.psi_v[j]);
    if (id > 0) out[d.root_coeffs[static_cast<std::size_t>(id - 1)]] = static_cast<int>(j);
  }
  return out;
}

std::optional<OracleSpec> g2_oracle(const PvsInstance& inst) {
  auto idx = coeff_index(inst);
  std::vector<int> slot(4);
  for (int k = 0; k < 4; ++k) {
    auto it = idx.find({k, 1});
    if (it == idx.end()) return std::nullopt;
    slot[k] = it->second;
  }
  int a = slot[0], b = slot[1], c = slot[2], d = slot[3];
  Polynomial disc = {
      {Q(18), {{a, 1}, {b, 1}, {c, 1}, {d, 1}}},
      {Q(-4), {{b, 3}, {d, 1}}},
      {Q(1), {{b, 2}, {c, 2}}},
      {Q(-4), {{a, 1}, {c, 3}}},
      {Q(-27), {{a, 2}, {d, 2}}},
  };
  OracleSpec spec;
  spec.kind = OracleKind::CustomPolynomial;
  spec.polynomials = {disc};
  spec.slot_count = inst.slot_count;
  return spec;
}

std::optional<OracleSpec> f4_oracle(const PvsInstance& inst) {
  static const std::map<std::pair<int, int>, std::pair<int, int>> pos = {
      {{0, 0}, {0, 0}}, {{1, 0}, {0, 1}}, {{1, 1}, {0, 2}}, {{2, 0}, {1, 1}}, {{2, 1}, {1, 2}}, {{2, 2}, {2, 2}}};
  OracleSpec spec;
  spec.kind = OracleKind::BinaryCubicSym3;
  spec.slot_count = inst.slot_count;
  for (const auto& w : inst.psi_v) {
    int id = inst.datum.root_id(w);
    if (id <= 0) return std::nullopt;
    const auto& c = inst.datum.root_coeffs[static_cast<std::size_t>(id - 1)];
    auto it = pos.find({c[2], c[3]});
    if (it == pos.end() || c[1] != 1 || c[0] > 1) return std::nullopt;
    spec.layout.push_back({c[0], it->second.first, it->second.second});
  }
  return spec;
}

std::optional<OracleSpec> e6_oracle(const PvsInstance& inst) {
  OracleSpec spec;
  spec.kind = OracleKind::BinaryCubicMat3;
  spec.slot_count = inst.slot_count;
  for (const auto& w : inst.psi_v) {
    int id = inst.datum.root_id(w);
    if (id <= 0) return std::nullopt;
    const auto& c = inst.datum.root_coeffs[static_cast<std::size_t>(id - 1)];
    int row = c[0] == 1 && c[2] == 1 ? 0 : c[0] == 0 && c[2] == 1 ? 1 : c[0] == 0 && c[2] == 0 ? 2 : -1;
    int col = c[4] == 0 && c[5] == 0 ? 0 : c[4] == 1 && c[5] == 0 ? 1 : c[4] == 1 && c[5] == 1 ? 2 : -1;
    if (row < 0 || col < 0 || c[3] != 1) return std::nullopt;
    spec.layout.push_back({c[1], row, col});
  }
  return spec;
}

struct Blocks {
  std::vector<int> block_of;  // per coordinate
  std::vector<int> offset;
  std::vector<int> size;
  std::vector<Q> value;
};

// Groups consecutive coordinates with equal value of h.
Blocks blocks_of(const QVec& h) {
  Blocks b;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i == 0 || h[i] != h[i - 1]) {
      b.offset.push_back(static_cast<int>(i));
      b.size.push_back(0);
      b.value.push_back(h[i]);
    }
    b.size.back()++;
    b.block_of.push_back(static_cast<int>(b.offset.size()) - 1);
  }
  return b;
}

std::optional<OracleSpec> gl_oracle(const PvsInstance& inst, const std::vector<int>& labels) {
  for (int l : labels)
    if (l != 0 && l != 2) return std::nullopt;
  QVec h = grading_cochar(inst.datum, labels);
  Blocks b = blocks_of(h);
  OracleSpec spec;
  spec.kind = OracleKind::GlChain;
  spec.shape = b.size;
  spec.slot_count = inst.slot_count;
  for (const auto& w : inst.psi_v) {
    int a = -1, c = -1;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 1) a = static_cast<int>(i);
      if (w[i] == -1) c = static_cast<int>(i);
    }
    if (a < 0 || c < 0 || b.block_of[c] != b.block_of[a] + 1) return std::nullopt;
    int m = b.block_of[a];
    spec.layout.push_back({m, a - b.offset[m], c - b.offset[m + 1]});
  }
  return spec;
}

// Types B, C, D in orthonormal coordinates with nonnegative h.
std::optional<OracleSpec> classical_oracle(const PvsInstance& inst, const std::vector<int>& labels,
                                           const std::string& type) {
  QVec h = grading_cochar(inst.datum, labels);
  for (const auto& v : h)
    if (sgn(v) < 0 || v.get_den() != 1) return std::nullopt;
  Blocks b = blocks_of(h);
  std::size_t nb = b.value.size();
  bool odd = true, even = true;
  for (std::size_t i = 0; i < nb; ++i) {
    if (b.value[i] != Q(static_cast<long>(2 * (nb - i) - 1))) odd = false;
    if (b.value[i] != Q(static_cast<long>(2 * (nb - 1 - i)))) even = false;
  }
  OracleSpec spec;
  spec.slot_count = inst.slot_count;
  if (odd && (type == "C" || type == "D")) {
    spec.kind = type == "C" ? OracleKind::SymChain : OracleKind::SkewChain;
    spec.shape = b.size;
  } else if (even && nb >= 2 && (type == "C" || type == "B" || type == "D")) {
    spec.kind = type == "C" ? OracleKind::SpChain : OracleKind::SoChain;
    spec.shape.assign(b.size.begin(), b.size.end() - 1);
    spec.shape.push_back(2 * b.size.back() + (type == "B" ? 1 : 0));
  } else {
    return std::nullopt;
  }
  for (std::size_t i = 0; i + 1 < spec.shape.size(); ++i)
    if (spec.shape[i] > spec.shape[i + 1]) return std::nullopt;
  std::size_t last = odd ? nb - 1 : nb - 2;  // block of the last matrix rows
  int zero = odd ? -1 : static_cast<int>(nb - 1);
  for (const auto& w : inst.psi_v) {
    std::vector<std::pair<int, int>> nz;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (sgn(w[i]) != 0) nz.emplace_back(static_cast<int>(i), static_cast<int>(w[i].get_num().get_si()));
    SlotRef ref;
    if (nz.size() == 2 && nz[0].second == 1 && nz[1].second == -1 && b.block_of[nz[1].first] != zero) {
      int a = nz[0].first, c = nz[1].first;
      int m = b.block_of[a];
      if (b.block_of[c] != m + 1) return std::nullopt;
      ref = {m, a - b.offset[m], c - b.offset[m + 1]};
    } else if (!odd && nz.size() == 2 && b.block_of[nz[1].first] == zero && nz[0].second == 1) {
      int a = nz[0].first, t = nz[1].first - b.offset[zero];
      int m = b.block_of[a];
      if (static_cast<std::size_t>(m) != last) return std::nullopt;
      ref = {m, a - b.offset[m], 2 * t + (nz[1].second == 1 ? 1 : 0)};
    } else if (!odd && nz.size() == 1 && nz[0].second == 1 && type == "B") {
      int a = nz[0].first;
      int m = b.block_of[a];
      if (static_cast<std::size_t>(m) != last) return std::nullopt;
      ref = {m, a - b.offset[m], 2 * b.size.back()};
    } else if (odd && nz.size() == 2 && nz[0].second == 1 && nz[1].second == 1) {
      int m = static_cast<int>(last);
      ref = {m, nz[0].first - b.offset[m], nz[1].first - b.offset[m]};
    } else if (odd && nz.size() == 1 && nz[0].second == 2) {
      int m = static_cast<int>(last);
      ref = {m, nz[0].first - b.offset[m], nz[0].first - b.offset[m]};
    } else {
      return std::nullopt;
    }
    spec.layout.push_back(ref);
  }
  return spec;
}

}  // namespace

QVec grading_cochar(const RootDatum& ambient, const std::vector<int>& labels) {
  check_labels(ambient, labels);
  std::size_t dim = ambient.ambient_dim;
  QMat rows;
  for (std::size_t i = 0; i < ambient.rank(); ++i) {
    QVec r = ambient.simple_roots[i];
    r.push_back(Q(labels[i]));
    rows.push_back(r);
  }
  Echelon e = rref(rows, dim);
  QVec x = zero_vec(dim);
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.rows[r][dim];
  return x;
}

std::optional<std::string> attach_builtin_oracle(PvsInstance& inst, const std::vector<int>& labels) {
  if (inst.datum.factors.size() != 1 || inst.psi_v.empty()) return std::nullopt;
  const auto& f = inst.datum.factors[0];
  std::optional<OracleSpec> spec;
  try {
    if (f.type == "G" && labels == std::vector<int>{0, 2}) spec = g2_oracle(inst);
    else if (f.type == "F" && labels == std::vector<int>{0, 2, 0, 0}) spec = f4_oracle(inst);
    else if (f.type == "E" && f.rank == 6 && labels == std::vector<int>{0, 0, 0, 2, 0, 0}) spec = e6_oracle(inst);
    else if (f.type == "GL") spec = gl_oracle(inst, labels);
    else if (f.type == "B" || f.type == "C" || f.type == "D") spec = classical_oracle(inst, labels, f.type);
    if (!spec) return std::nullopt;
    validate_oracle(*spec);
  } catch (const ShapeMismatch&) {
    return std::nullopt;
  }
  inst.oracle = spec;
  inst.fund_chars.clear();
  for (std::size_t i = 0; i < frip_count(*spec); ++i) inst.fund_chars.push_back(frip_weight(*spec, inst.psi_v, i, inst.seed));
  return to_string(spec->kind);
}

PvsInstance build_dk_pvs(const RootDatum& ambient, const std::vector<int>& labels, const DkOptions& opts) {
  check_labels(ambient, labels);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] < 0) throw NonDominant("grading label of simple root " + std::to_string(i + 1) + " is negative");
  PvsInstance inst;
  inst.datum = ambient;
  inst.seed = opts.seed;
  inst.caps = opts.caps;
  std::vector<int> g;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == 0) g.push_back(static_cast<int>(i));
  inst.g_simple = ParabolicIndex::of(g);
  for (std::size_t k = 0; k < ambient.positive_roots.size(); ++k)
    if (grade_of(ambient, k, labels) == 2) inst.psi_v.push_back(ambient.positive_roots[k]);
  inst.mult.assign(inst.psi_v.size(), 1);
  std::vector<QVec> coroots;
  for (int i : g) coroots.push_back(ambient.simple_coroots[i]);
  inst.xstar_g = kernel_basis(coroots, ambient.ambient_dim);
  inst.slot_count = inst.psi_v.size();
  if (opts.attach_oracle) attach_builtin_oracle(inst, labels);
  finalize(inst);
  return inst;
}

std::vector<int> ifd_to_grading(const RootDatum& ambient, const IfdSpec& ifd) {
  auto q = ifd.q.indices();
  if (!ifd.q.subset_of(ParabolicIndex::full(ambient.rank())))
    throw InconsistentIfd(ifd.label + ": Q refers to a simple root outside the datum");
  if (ifd.hl.size() != q.size())
    throw InconsistentIfd(ifd.label + ": hL needs one label per simple root of Q");
  std::vector<int> labels(ambient.rank(), 2);
  for (std::size_t t = 0; t < q.size(); ++t) {
    if (ifd.hl[t] < 0) throw InconsistentIfd(ifd.label + ": hL is not dominant for the Levi of Q");
    labels[q[t]] = ifd.hl[t];
  }
  return labels;
}

std::vector<int> Filtration::piece(int i) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < grade.size(); ++k) {
    if (grade[k] >= i) out.push_back(static_cast<int>(k) + 1);
    if (-grade[k] >= i) out.push_back(-static_cast<int>(k) - 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Filtration ifiltration_pieces(const RootDatum& ambient, const std::vector<int>& labels) {
  check_labels(ambient, labels);
  Filtration f;
  f.labels = labels;
  for (std::size_t k = 0; k < ambient.positive_roots.size(); ++k) f.grade.push_back(grade_of(ambient, k, labels));
  auto signed_grade = [&](int id) { return id > 0 ? f.grade[id - 1] : -f.grade[-id - 1]; };
  auto root = [&](int id) { return id > 0 ? ambient.positive_roots[id - 1] : neg(ambient.positive_roots[-id - 1]); };
  int n = static_cast<int>(ambient.positive_roots.size());
  for (int a = -n; a <= n && f.bracket_closed; ++a)
    for (int b = -n; b <= n; ++b) {
      if (a == 0 || b == 0) continue;
      QVec s = add(root(a), root(b));
      int c = ambient.root_id(s);
      if (c != 0 && signed_grade(c) < signed_grade(a) + signed_grade(b)) {
        f.bracket_closed = false;
        break;
      }
    }
  return f;
}

namespace {

struct CandidateOutcome {
  bool admissible = false;
  Mask u = 0;
  MinsetStatus minset = MinsetStatus::Unknown;
  ParabolicIndex stab;
  std::exception_ptr error;
};

CandidateOutcome evaluate_candidate(const RootDatum& ambient, const PvsInstance& target, const QVec& h,
                                    const WeylElement& w) {
  CandidateOutcome out;
  QVec y = act_cochar(ambient, w, h);
  for (int k : target.phi_g_plus)
    if (sgn(dot(ambient.positive_roots[k], y)) < 0) return out;
  out.admissible = true;
  for (std::size_t j = 0; j < target.psi_v.size(); ++j)
    if (dot(target.psi_v[j], y) >= 2) out.u |= Mask{1} << j;
  std::vector<int> stab;
  for (int i : target.g_simple.indices())
    if (sgn(dot(ambient.simple_roots[i], y)) == 0) stab.push_back(i);
  out.stab = ParabolicIndex::of(stab);
  out.minset = minset_certify(target, out.u).status;
  return out;
}

bool shortlex_less(const WeylElement& a, const WeylElement& b) {
  if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
  return a.word < b.word;
}

}  // namespace

StandardizeResult standardize_ifiltration(const RootDatum& ambient, const PvsInstance& target,
                                          const std::vector<int>& tilde_labels, const StandardizeOptions& opts) {
  check_labels(ambient, tilde_labels);
  QVec h = grading_cochar(ambient, tilde_labels);
  ParabolicIndex p = target.g_simple;
  std::vector<int> j_set;
  for (std::size_t i = 0; i < tilde_labels.size(); ++i)
    if (tilde_labels[i] == 0) j_set.push_back(static_cast<int>(i));
  ParabolicIndex j = ParabolicIndex::of(j_set);
  std::vector<WeylElement> candidates = minimal_double_coset_reps(ambient, p, j);

  std::vector<CandidateOutcome> outcomes(candidates.size());
  long count = static_cast<long>(candidates.size());
  int threads = opts.serial ? 1 : resolve_threads(opts.jobs);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads != 1)
  for (long i = 0; i < count; ++i) {
    try {
      outcomes[i] = evaluate_candidate(ambient, target, h, candidates[i]);
    } catch (...) {
      outcomes[i].error = std::current_exception();
    }
  }
  for (const auto& o : outcomes)
    if (o.error) std::rethrow_exception(o.error);

  StandardizeResult res;
  res.candidates = candidates.size();
  std::optional<std::size_t> best;
  std::set<Mask> passing_spaces;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& o = outcomes[i];
    if (candidates[i].word.empty()) {
      res.identity_admissible = o.admissible;
      res.identity_u = o.u;
      res.identity_minset = o.minset;
    }
    if (!o.admissible) continue;
    ++res.admissible;
    if (o.minset != MinsetStatus::Certified) continue;
    ++res.passing;
    passing_spaces.insert(o.u);
    if (!best || shortlex_less(candidates[i], candidates[*best])) best = i;
  }
  if (passing_spaces.size() > 1)
    throw AmbiguityError("standardization found " + std::to_string(passing_spaces.size()) +
                         " different subspaces for one filtration");
  if (!best) return res;
  res.status = StandardizeStatus::Found;
  res.w = candidates[*best];
  res.u = outcomes[*best].u;
  res.predicted_stab = outcomes[*best].stab;
  res.special = is_special(target, res.u);
  res.stab_matches = res.special->p0_stable && res.special->stab == res.predicted_stab;
  return res;
}

StandardizeResult richardson_special(const RootDatum& ambient, ParabolicIndex q, const PvsInstance& target,
                                     const StandardizeOptions& opts) {
  IfdSpec ifd;
  ifd.label = "Richardson";
  ifd.q = q;
  ifd.hl.assign(q.size(), 0);
  return standardize_ifiltration(ambient, target, ifd_to_grading(ambient, ifd), opts);
}

}  // namespace pvsa
