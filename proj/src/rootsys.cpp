#include "pvsa/rootsys.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <set>

#include "pvsa/exactla.hpp"

namespace pvsa {

ParabolicIndex ParabolicIndex::of(const std::vector<int>& indices) {
  std::uint64_t b = 0;
  for (int i : indices) {
    if (i < 0 || i >= 64) throw std::out_of_range("parabolic index out of range");
    b |= std::uint64_t{1} << i;
  }
  return ParabolicIndex(b);
}

ParabolicIndex ParabolicIndex::full(std::size_t rank) {
  return ParabolicIndex(rank >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rank) - 1);
}

std::vector<int> ParabolicIndex::indices() const {
  std::vector<int> out;
  for (int i = 0; i < 64; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::size_t ParabolicIndex::size() const { return static_cast<std::size_t>(__builtin_popcountll(bits_)); }

std::string ParabolicIndex::pattern(std::size_t rank) const {
  std::string s = "(";
  for (std::size_t i = 0; i < rank; ++i) s += contains(static_cast<int>(i)) ? '*' : '0';
  return s + ")";
}

namespace {

struct LocalFactor {
  std::size_t dim = 0;
  std::vector<QVec> roots;
  std::vector<QVec> coroots;
  QMat gram;
};

QMat identity(std::size_t n) {
  QMat m(n, QVec(n, Q(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

LocalFactor orthonormal(std::size_t dim, std::vector<QVec> roots) {
  LocalFactor f;
  f.dim = dim;
  for (auto& r : roots) f.coroots.push_back(scale(Q(2) / dot(r, r), r));
  f.roots = std::move(roots);
  f.gram = identity(dim);
  return f;
}

QVec ortho(std::size_t dim, std::initializer_list<std::pair<std::size_t, long>> entries) {
  QVec v = zero_vec(dim);
  for (auto [i, c] : entries) v[i] = c;
  return v;
}

QMat invert(const QMat& m) {
  std::size_t n = m.size();
  QMat inv(n, QVec(n));
  for (std::size_t j = 0; j < n; ++j) {
    auto col = solve_square(m, unit_vec(n, j));
    if (!col) throw std::logic_error("singular Gram matrix");
    for (std::size_t i = 0; i < n; ++i) inv[i][j] = (*col)[i];
  }
  return inv;
}

// Characters in simple-root coordinates, cocharacters in fundamental
// coweight coordinates; b is the Gram matrix of the simple roots.
LocalFactor root_coordinates(const QMat& b) {
  LocalFactor f;
  std::size_t n = b.size();
  f.dim = n;
  for (std::size_t i = 0; i < n; ++i) f.roots.push_back(unit_vec(n, i));
  for (std::size_t j = 0; j < n; ++j) {
    QVec c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = 2 * b[k][j] / b[j][j];
    f.coroots.push_back(c);
  }
  f.gram = invert(b);
  return f;
}

QMat simply_laced(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  QMat b(n, QVec(n, Q(0)));
  for (std::size_t i = 0; i < n; ++i) b[i][i] = 2;
  for (auto [i, j] : edges) b[i][j] = b[j][i] = -1;
  return b;
}

LocalFactor make_factor(const std::string& type, int n) {
  auto need = [&](bool ok) {
    if (!ok) throw UnsupportedType("unsupported root datum factor " + type + std::to_string(n));
  };
  std::size_t un = static_cast<std::size_t>(n);
  if (type == "GL") {
    need(n >= 1);
    std::vector<QVec> roots;
    for (std::size_t i = 0; i + 1 < un; ++i) roots.push_back(ortho(un, {{i, 1}, {i + 1, -1}}));
    return orthonormal(un, roots);
  }
  if (type == "T") {
    need(n >= 1);
    return orthonormal(un, {});
  }
  if (type == "A") {
    need(n >= 1);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return root_coordinates(simply_laced(un, edges));
  }
  if (type == "B" || type == "C" || type == "D") {
    need(type == "D" ? n >= 3 : n >= 2);
    std::vector<QVec> roots;
    for (std::size_t i = 0; i + 1 < un; ++i) roots.push_back(ortho(un, {{i, 1}, {i + 1, -1}}));
    if (type == "B") roots.push_back(ortho(un, {{un - 1, 1}}));
    if (type == "C") roots.push_back(ortho(un, {{un - 1, 2}}));
    if (type == "D") roots.push_back(ortho(un, {{un - 2, 1}, {un - 1, 1}}));
    return orthonormal(un, roots);
  }
  if (type == "G") {
    need(n == 2);
    return root_coordinates({{Q(2), Q(-3)}, {Q(-3), Q(6)}});
  }
  if (type == "F") {
    need(n == 4);
    QMat b = {{Q(2), Q(-1), Q(0), Q(0)}, {Q(-1), Q(2), Q(-1), Q(0)}, {Q(0), Q(-1), Q(1), Q(-1, 2)},
              {Q(0), Q(0), Q(-1, 2), Q(1)}};
    return root_coordinates(b);
  }
  if (type == "E") {
    need(n == 6 || n == 7);
    std::vector<std::pair<int, int>> edges = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 3}};
    if (n == 7) edges.emplace_back(5, 6);
    return root_coordinates(simply_laced(un, edges));
  }
  throw UnsupportedType("unknown root datum factor type '" + type + "'");
}

void generate_positive_roots(RootDatum& d) {
  std::size_t r = d.rank();
  using Coeffs = std::vector<int>;
  std::vector<Coeffs> roots;
  std::set<Coeffs> seen;
  for (std::size_t i = 0; i < r; ++i) {
    Coeffs c(r, 0);
    c[i] = 1;
    roots.push_back(c);
    seen.insert(c);
  }
  for (std::size_t k = 0; k < roots.size(); ++k) {
    Coeffs g = roots[k];
    for (std::size_t i = 0; i < r; ++i) {
      int height = std::accumulate(g.begin(), g.end(), 0);
      if (height == 1 && g[i] == 1) continue;
      int p = 0;
      for (;;) {
        Coeffs h = g;
        h[i] -= p + 1;
        if (h[i] < 0 || !seen.count(h)) break;
        ++p;
      }
      int pairing = 0;
      for (std::size_t j = 0; j < r; ++j) pairing += g[j] * d.cartan[j][i];
      if (p - pairing > 0) {
        Coeffs h = g;
        h[i] += 1;
        if (seen.insert(h).second) roots.push_back(h);
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Coeffs& a, const Coeffs& b) {
    int ha = std::accumulate(a.begin(), a.end(), 0), hb = std::accumulate(b.begin(), b.end(), 0);
    if (ha != hb) return ha < hb;
    return a > b;
  });
  d.root_coeffs = roots;
  d.positive_roots.clear();
  for (const auto& c : roots) {
    QVec v = zero_vec(d.ambient_dim);
    for (std::size_t j = 0; j < r; ++j)
      if (c[j]) axpy(v, Q(c[j]), d.simple_roots[j]);
    d.positive_roots.push_back(v);
  }
  d.multiplicity.assign(roots.size(), 1);
  d.index.clear();
  for (std::size_t i = 0; i < d.positive_roots.size(); ++i) {
    d.index[d.positive_roots[i]] = static_cast<int>(i) + 1;
    d.index[neg(d.positive_roots[i])] = -static_cast<int>(i) - 1;
  }
}

}  // namespace

int RootDatum::root_id(const QVec& v) const {
  auto it = index.find(v);
  return it == index.end() ? 0 : it->second;
}

QVec RootDatum::coroot_of(std::size_t positive_index) const {
  const auto& coeffs = root_coeffs.at(positive_index);
  auto sq = [&](const QVec& x) {
    Q s = 0;
    for (std::size_t a = 0; a < ambient_dim; ++a)
      for (std::size_t b = 0; b < ambient_dim; ++b) s += x[a] * cochar_gram[a][b] * x[b];
    return s;
  };
  // The coroot is proportional to sum_j c_j |alpha_j|^2 alpha_j^vee, and
  // |alpha_j|^2 is inversely proportional to |alpha_j^vee|^2.
  QVec out = zero_vec(ambient_dim);
  for (std::size_t j = 0; j < rank(); ++j)
    if (coeffs[j]) axpy(out, Q(coeffs[j]) / sq(simple_coroots[j]), simple_coroots[j]);
  return scale(Q(2) / dot(positive_roots[positive_index], out), out);
}

QVec RootDatum::delta0() const {
  QVec d = zero_vec(ambient_dim);
  for (const auto& r : positive_roots) d = add(d, r);
  return d;
}

RootDatum build_root_datum(const std::string& spec) {
  static const std::regex token(R"(^(GL|T|A|B|C|D|E|F|G)(\d+)$)");
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == 'x' || ch == '*') {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  parts.push_back(cur);

  RootDatum d;
  d.type_label = spec;
  std::vector<LocalFactor> locals;
  for (const auto& p : parts) {
    std::smatch m;
    if (!std::regex_match(p, m, token)) throw UnsupportedType("cannot parse root datum factor '" + p + "'");
    int n = std::stoi(m[2]);
    locals.push_back(make_factor(m[1], n));
    Factor f;
    f.type = m[1];
    f.rank = static_cast<int>(locals.back().roots.size());
    f.dim = static_cast<int>(locals.back().dim);
    f.simple_offset = d.factors.empty() ? 0 : d.factors.back().simple_offset + d.factors.back().rank;
    f.coord_offset = d.factors.empty() ? 0 : d.factors.back().coord_offset + d.factors.back().dim;
    d.factors.push_back(f);
  }
  for (const auto& lf : locals) d.ambient_dim += lf.dim;
  d.cochar_gram.assign(d.ambient_dim, QVec(d.ambient_dim, Q(0)));
  for (std::size_t k = 0; k < locals.size(); ++k) {
    const auto& lf = locals[k];
    std::size_t off = static_cast<std::size_t>(d.factors[k].coord_offset);
    auto embed = [&](const QVec& v) {
      QVec out = zero_vec(d.ambient_dim);
      for (std::size_t i = 0; i < v.size(); ++i) out[off + i] = v[i];
      return out;
    };
    for (const auto& r : lf.roots) d.simple_roots.push_back(embed(r));
    for (const auto& c : lf.coroots) d.simple_coroots.push_back(embed(c));
    for (std::size_t i = 0; i < lf.dim; ++i)
      for (std::size_t j = 0; j < lf.dim; ++j) d.cochar_gram[off + i][off + j] = lf.gram[i][j];
  }
  std::size_t r = d.rank();
  if (r > 64) throw UnsupportedType("rank above 64 is not supported");
  d.cartan.assign(r, std::vector<int>(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      Q c = dot(d.simple_roots[i], d.simple_coroots[j]);
      if (c.get_den() != 1) throw std::logic_error("non-integral Cartan entry");
      d.cartan[i][j] = static_cast<int>(c.get_num().get_si());
    }
  generate_positive_roots(d);
  return d;
}

std::vector<int> roots_supported_on(const RootDatum& datum, ParabolicIndex subset) {
  std::vector<int> out;
  for (std::size_t k = 0; k < datum.positive_roots.size(); ++k) {
    bool inside = true;
    for (std::size_t j = 0; j < datum.rank(); ++j)
      if (datum.root_coeffs[k][j] != 0 && !subset.contains(static_cast<int>(j))) inside = false;
    if (inside) out.push_back(static_cast<int>(k));
  }
  return out;
}

ParabolicRoots positive_roots_of(const RootDatum& datum, ParabolicIndex parabolic) {
  ParabolicRoots pr;
  pr.delta0_levi = zero_vec(datum.ambient_dim);
  std::vector<int> levi = roots_supported_on(datum, parabolic);
  std::vector<bool> in_levi(datum.positive_roots.size(), false);
  for (int k : levi) in_levi[k] = true;
  for (std::size_t k = 0; k < datum.positive_roots.size(); ++k) {
    if (in_levi[k]) {
      pr.levi.push_back(static_cast<int>(k));
      pr.delta0_levi = add(pr.delta0_levi, datum.positive_roots[k]);
    } else {
      pr.nilradical.push_back(static_cast<int>(k));
    }
  }
  return pr;
}

QVec reflect(const RootDatum& datum, int i, const QVec& chi) {
  QVec out = chi;
  axpy(out, -dot(chi, datum.simple_coroots.at(i)), datum.simple_roots[i]);
  return out;
}

QVec reflect_cochar(const RootDatum& datum, int i, const QVec& x) {
  QVec out = x;
  axpy(out, -dot(datum.simple_roots.at(i), x), datum.simple_coroots[i]);
  return out;
}

QVec act(const RootDatum& datum, const WeylElement& w, const QVec& chi) {
  QVec v = chi;
  for (auto it = w.word.rbegin(); it != w.word.rend(); ++it) v = reflect(datum, *it, v);
  return v;
}

QVec act_inverse(const RootDatum& datum, const WeylElement& w, const QVec& chi) {
  QVec v = chi;
  for (int i : w.word) v = reflect(datum, i, v);
  return v;
}

QVec act_cochar(const RootDatum& datum, const WeylElement& w, const QVec& x) {
  QVec v = x;
  for (auto it = w.word.rbegin(); it != w.word.rend(); ++it) v = reflect_cochar(datum, *it, v);
  return v;
}

QMat action_matrix(const RootDatum& datum, const WeylElement& w) {
  std::size_t d = datum.ambient_dim;
  QMat m(d, QVec(d));
  for (std::size_t j = 0; j < d; ++j) {
    QVec col = act(datum, w, unit_vec(d, j));
    for (std::size_t i = 0; i < d; ++i) m[i][j] = col[i];
  }
  return m;
}

std::size_t length(const RootDatum& datum, const WeylElement& w) {
  std::size_t n = 0;
  for (const auto& r : datum.positive_roots)
    if (datum.root_id(act(datum, w, r)) < 0) ++n;
  return n;
}

WeylElement inverse(const WeylElement& w) {
  WeylElement v;
  v.word.assign(w.word.rbegin(), w.word.rend());
  return v;
}

WeylElement multiply(const WeylElement& a, const WeylElement& b) {
  WeylElement v = a;
  v.word.insert(v.word.end(), b.word.begin(), b.word.end());
  return v;
}

WeylElement reduce(const RootDatum& datum, const WeylElement& w) {
  QVec y = act_inverse(datum, w, datum.delta0());
  std::vector<int> descents;
  for (;;) {
    int j = -1;
    for (std::size_t i = 0; i < datum.rank(); ++i)
      if (sgn(dot(y, datum.simple_coroots[i])) < 0) {
        j = static_cast<int>(i);
        break;
      }
    if (j < 0) break;
    y = reflect(datum, j, y);
    descents.push_back(j);
  }
  WeylElement out;
  out.word.assign(descents.rbegin(), descents.rend());
  return out;
}

std::uint64_t weyl_order(const RootDatum& datum) {
  auto fact = [](std::uint64_t n) {
    std::uint64_t f = 1;
    for (std::uint64_t i = 2; i <= n; ++i) f *= i;
    return f;
  };
  std::uint64_t total = 1;
  for (const auto& f : datum.factors) {
    std::uint64_t n = static_cast<std::uint64_t>(f.rank);
    std::uint64_t o = 1;
    if (f.type == "GL") o = fact(n + 1);
    else if (f.type == "T") o = 1;
    else if (f.type == "A") o = fact(n + 1);
    else if (f.type == "B" || f.type == "C") o = (std::uint64_t{1} << n) * fact(n);
    else if (f.type == "D") o = (std::uint64_t{1} << (n - 1)) * fact(n);
    else if (f.type == "G") o = 12;
    else if (f.type == "F") o = 1152;
    else if (f.type == "E") o = n == 6 ? 51840 : 2903040;
    total *= o;
  }
  return total;
}

void for_each_weyl(const RootDatum& datum, const std::function<bool(const WeylElement&)>& visit,
                   const std::function<bool(const std::vector<long>&)>& prune) {
  if (weyl_order(datum) > kWeylEnumerationCap)
    throw WeylTooLarge("Weyl group of " + datum.type_label + " has order " + std::to_string(weyl_order(datum)) +
                       ", above the enumeration cap");
  std::size_t r = datum.rank();
  std::vector<std::vector<long>> alpha, coroot;
  for (std::size_t i = 0; i < r; ++i) {
    alpha.push_back(to_longs(datum.simple_roots[i]));
    coroot.push_back(to_longs(datum.simple_coroots[i]));
  }
  std::vector<long> start = to_longs(datum.delta0());
  std::size_t d = datum.ambient_dim;
  auto pair = [&](const std::vector<long>& x, std::size_t i) {
    long s = 0;
    for (std::size_t k = 0; k < d; ++k) s += x[k] * coroot[i][k];
    return s;
  };
  std::vector<int> path;
  bool stop = false;
  std::function<void(const std::vector<long>&)> dfs = [&](const std::vector<long>& x) {
    WeylElement w;
    w.word.assign(path.rbegin(), path.rend());
    if (!visit(w)) {
      stop = true;
      return;
    }
    for (std::size_t i = 0; i < r && !stop; ++i) {
      long c = pair(x, i);
      if (c <= 0) continue;
      std::vector<long> y = x;
      for (std::size_t k = 0; k < d; ++k) y[k] -= c * alpha[i][k];
      std::size_t first = r;
      for (std::size_t j = 0; j < r; ++j)
        if (pair(y, j) < 0) {
          first = j;
          break;
        }
      if (first != i) continue;
      if (prune && prune(y)) continue;
      path.push_back(static_cast<int>(i));
      dfs(y);
      path.pop_back();
    }
  };
  if (prune && prune(start)) return;
  dfs(start);
}

std::vector<WeylElement> weyl_group(const RootDatum& datum) {
  std::vector<WeylElement> out;
  for_each_weyl(datum, [&](const WeylElement& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

std::vector<WeylElement> minimal_double_coset_reps(const RootDatum& datum, ParabolicIndex left,
                                                   ParabolicIndex right) {
  if (weyl_order(datum) > kWeylEnumerationCap)
    throw WeylTooLarge("Weyl group of " + datum.type_label + " has order " + std::to_string(weyl_order(datum)) +
                       ", above the enumeration cap");
  // Walk u = w^{-1}. Right descents of u are tracked through the images
  // u(alpha_i), i in left; they form a suffix-closed condition, so whole
  // subtrees can be dropped.
  std::size_t r = datum.rank(), d = datum.ambient_dim;
  std::vector<std::vector<long>> alpha, coroot;
  for (std::size_t i = 0; i < r; ++i) {
    alpha.push_back(to_longs(datum.simple_roots[i]));
    coroot.push_back(to_longs(datum.simple_coroots[i]));
  }
  auto pair = [&](const std::vector<long>& x, std::size_t i) {
    long s = 0;
    for (std::size_t k = 0; k < d; ++k) s += x[k] * coroot[i][k];
    return s;
  };
  auto reflect_long = [&](std::vector<long> x, std::size_t i) {
    long c = pair(x, i);
    for (std::size_t k = 0; k < d; ++k) x[k] -= c * alpha[i][k];
    return x;
  };
  // Height functional: positive on positive roots.
  QVec height_cochar;
  {
    QMat rows;
    for (std::size_t i = 0; i < r; ++i) {
      QVec row = datum.simple_roots[i];
      row.push_back(Q(1));
      rows.push_back(row);
    }
    Echelon e = rref(rows, d);
    height_cochar = zero_vec(d);
    for (std::size_t k = 0; k < e.pivots.size(); ++k) height_cochar[e.pivots[k]] = e.rows[k][d];
  }
  auto positive = [&](const std::vector<long>& root) {
    Q s = 0;
    for (std::size_t k = 0; k < d; ++k) s += Q(root[k]) * height_cochar[k];
    return sgn(s) > 0;
  };
  std::vector<int> left_idx = left.indices(), right_idx = right.indices();
  std::vector<WeylElement> out;
  std::vector<int> path;
  std::function<void(const std::vector<long>&, const std::vector<std::vector<long>>&)> dfs =
      [&](const std::vector<long>& x, const std::vector<std::vector<long>>& images) {
        bool right_free = true;
        for (int j : right_idx)
          if (pair(x, static_cast<std::size_t>(j)) < 0) right_free = false;
        if (right_free) {
          WeylElement w;
          w.word = path;  // u = s_{path[last]}...s_{path[0]}, so w = u^{-1} = s_{path[0]}...
          out.push_back(w);
        }
        for (std::size_t i = 0; i < r; ++i) {
          long c = pair(x, i);
          if (c <= 0) continue;
          std::vector<long> y = x;
          for (std::size_t k = 0; k < d; ++k) y[k] -= c * alpha[i][k];
          std::size_t first = r;
          for (std::size_t j = 0; j < r; ++j)
            if (pair(y, j) < 0) {
              first = j;
              break;
            }
          if (first != i) continue;
          std::vector<std::vector<long>> next;
          bool ok = true;
          for (const auto& img : images) {
            next.push_back(reflect_long(img, i));
            if (!positive(next.back())) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          path.push_back(static_cast<int>(i));
          dfs(y, next);
          path.pop_back();
        }
      };
  std::vector<std::vector<long>> start_images;
  for (int i : left_idx) start_images.push_back(alpha[static_cast<std::size_t>(i)]);
  dfs(to_longs(datum.delta0()), start_images);
  return out;
}

bool has_left_descent_in(const RootDatum& datum, const WeylElement& w, ParabolicIndex set) {
  QVec x = act(datum, w, datum.delta0());
  for (int i : set.indices())
    if (sgn(dot(x, datum.simple_coroots.at(i))) < 0) return true;
  return false;
}

bool has_right_descent_in(const RootDatum& datum, const WeylElement& w, ParabolicIndex set) {
  QVec y = act_inverse(datum, w, datum.delta0());
  for (int j : set.indices())
    if (sgn(dot(y, datum.simple_coroots.at(j))) < 0) return true;
  return false;
}

WeylElement min_double_coset_rep(const RootDatum& datum, const WeylElement& w, ParabolicIndex left,
                                 ParabolicIndex right) {
  WeylElement cur = reduce(datum, w);
  for (bool changed = true; changed;) {
    changed = false;
    QVec x = act(datum, cur, datum.delta0());
    for (int i : left.indices()) {
      if (sgn(dot(x, datum.simple_coroots.at(i))) < 0) {
        cur.word.insert(cur.word.begin(), i);
        cur = reduce(datum, cur);
        changed = true;
        break;
      }
    }
    if (changed) continue;
    QVec y = act_inverse(datum, cur, datum.delta0());
    for (int j : right.indices()) {
      if (sgn(dot(y, datum.simple_coroots.at(j))) < 0) {
        cur.word.push_back(j);
        cur = reduce(datum, cur);
        changed = true;
        break;
      }
    }
  }
  return cur;
}

}  // namespace pvsa
