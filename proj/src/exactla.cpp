#include "pvsa/exactla.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pvsa {

namespace {

std::size_t common_length(const std::vector<QVec>& vectors) {
  if (vectors.empty()) return 0;
  std::size_t n = vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != n) throw DimensionMismatch("vectors of unequal length");
  return n;
}

}  // namespace

Echelon rref(QMat m, std::size_t ncols) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && sgn(m[piv][col]) == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    Q inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || sgn(m[r][col]) == 0) continue;
      Q f = m[r][col];
      for (std::size_t c = col; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    e.pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  e.rows = std::move(m);
  return e;
}

int rank_of_span(const std::vector<QVec>& vectors) {
  std::size_t n = common_length(vectors);
  return static_cast<int>(rref(vectors, n).pivots.size());
}

std::vector<QVec> kernel_basis(const std::vector<QVec>& vectors, std::size_t dim) {
  for (const auto& v : vectors)
    if (v.size() != dim) throw DimensionMismatch("kernel_basis: vector length differs from ambient dimension");
  Echelon e = rref(vectors, dim);
  std::vector<bool> is_pivot(dim, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<QVec> basis;
  for (std::size_t f = 0; f < dim; ++f) {
    if (is_pivot[f]) continue;
    QVec x = zero_vec(dim);
    x[f] = 1;
    for (std::size_t r = 0; r < e.rows.size(); ++r) x[e.pivots[r]] = -e.rows[r][f];
    basis.push_back(primitive(x));
  }
  return basis;
}

std::vector<std::size_t> independent_subset(const std::vector<QVec>& vectors, std::size_t dim) {
  std::vector<std::size_t> chosen;
  QMat acc;
  int rank = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) throw DimensionMismatch("independent_subset: length mismatch");
    acc.push_back(vectors[i]);
    int r = static_cast<int>(rref(acc, dim).pivots.size());
    if (r > rank) {
      rank = r;
      chosen.push_back(i);
    } else {
      acc.pop_back();
    }
  }
  return chosen;
}

std::optional<QVec> solve_square(const QMat& m, const QVec& b) {
  std::size_t n = m.size();
  QMat aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw DimensionMismatch("solve_square: matrix is not square");
    aug[i] = m[i];
    aug[i].push_back(b.at(i));
  }
  Echelon e = rref(aug, n);
  if (e.pivots.size() < n) return std::nullopt;
  QVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[e.pivots[i]] = e.rows[i][n];
  return x;
}

namespace {

class Tableau {
 public:
  Tableau(const QMat& a, const QVec& b, std::size_t n) : n_(n) {
    std::size_t m = a.size();
    width_ = n + m + 1;
    rows_.assign(m, QVec(width_, Q(0)));
    basis_.resize(m);
    for (std::size_t r = 0; r < m; ++r) {
      bool flip = sgn(b[r]) < 0;
      for (std::size_t j = 0; j < n; ++j) rows_[r][j] = flip ? Q(-a[r][j]) : a[r][j];
      rows_[r][n + r] = 1;
      rows_[r][width_ - 1] = flip ? Q(-b[r]) : b[r];
      basis_[r] = n + r;
    }
    allowed_.assign(width_ - 1, true);
  }

  // Returns false when unbounded.
  bool optimize(const QVec& cost) {
    QVec obj = reduced_costs(cost);
    for (;;) {
      std::size_t enter = width_;
      for (std::size_t j = 0; j + 1 < width_; ++j)
        if (allowed_[j] && sgn(obj[j]) > 0) {
          enter = j;
          break;
        }
      if (enter == width_) return true;
      std::size_t leave = rows_.size();
      Q best;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (sgn(rows_[r][enter]) <= 0) continue;
        Q ratio = rows_[r][width_ - 1] / rows_[r][enter];
        if (leave == rows_.size() || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_.size()) return false;
      pivot(leave, enter, obj);
    }
  }

  Q objective(const QVec& cost) const {
    Q v = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) v += cost[basis_[r]] * rows_[r][width_ - 1];
    return v;
  }

  void expel_artificials() {
    for (std::size_t r = 0; r < rows_.size();) {
      if (basis_[r] < n_) {
        ++r;
        continue;
      }
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (sgn(rows_[r][j]) != 0) {
          col = j;
          break;
        }
      if (col == n_) {
        rows_.erase(rows_.begin() + static_cast<long>(r));
        basis_.erase(basis_.begin() + static_cast<long>(r));
        continue;
      }
      QVec dummy(width_, Q(0));
      pivot(r, col, dummy);
      ++r;
    }
    for (std::size_t j = n_; j + 1 < width_; ++j) allowed_[j] = false;
  }

  QVec solution() const {
    QVec x(n_, Q(0));
    for (std::size_t r = 0; r < rows_.size(); ++r)
      if (basis_[r] < n_) x[basis_[r]] = rows_[r][width_ - 1];
    return x;
  }

  std::size_t width() const { return width_; }

 private:
  QVec reduced_costs(const QVec& cost) const {
    QVec obj(width_, Q(0));
    for (std::size_t j = 0; j + 1 < width_; ++j) obj[j] = cost[j];
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Q& cb = cost[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) obj[j] -= cb * rows_[r][j];
    }
    return obj;
  }

  void pivot(std::size_t row, std::size_t col, QVec& obj) {
    Q inv = 1 / rows_[row][col];
    for (auto& x : rows_[row]) x *= inv;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (r == row || sgn(rows_[r][col]) == 0) continue;
      Q f = rows_[r][col];
      for (std::size_t j = 0; j < width_; ++j) rows_[r][j] -= f * rows_[row][j];
    }
    if (sgn(obj[col]) != 0) {
      Q f = obj[col];
      for (std::size_t j = 0; j < width_; ++j) obj[j] -= f * rows_[row][j];
    }
    basis_[row] = col;
  }

  std::size_t n_;
  std::size_t width_;
  QMat rows_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
};

}  // namespace

LpResult lp_maximize(const QMat& a, const QVec& b, const QVec& c) {
  std::size_t m = a.size();
  std::size_t n = c.size();
  if (b.size() != m) throw DimensionMismatch("lp: rhs length differs from row count");
  for (const auto& row : a)
    if (row.size() != n) throw DimensionMismatch("lp: row length differs from variable count");

  Tableau t(a, b, n);
  QVec phase1(t.width() - 1, Q(0));
  for (std::size_t j = n; j < n + m; ++j) phase1[j] = -1;
  t.optimize(phase1);
  LpResult res;
  if (sgn(t.objective(phase1)) < 0) {
    res.status = LpResult::Status::Infeasible;
    return res;
  }
  t.expel_artificials();
  QVec phase2(t.width() - 1, Q(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  if (!t.optimize(phase2)) {
    res.status = LpResult::Status::Unbounded;
    res.x = t.solution();
    return res;
  }
  res.status = LpResult::Status::Optimal;
  res.x = t.solution();
  res.value = t.objective(phase2);
  return res;
}

namespace {

QMat generator_matrix(const QVec& target, const std::vector<QVec>& generators) {
  std::size_t d = target.size();
  for (const auto& g : generators)
    if (g.size() != d) throw DimensionMismatch("cone: generator length differs from target length");
  QMat a(d, QVec(generators.size()));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < generators.size(); ++j) a[i][j] = generators[j][i];
  return a;
}

}  // namespace

ConeMembership cone_membership(const QVec& target, const std::vector<QVec>& generators) {
  QMat a = generator_matrix(target, generators);
  ConeMembership out;
  if (is_zero(target)) {
    out.member = true;
    out.coefficients = zero_vec(generators.size());
    return out;
  }
  LpResult r = lp_maximize(a, target, zero_vec(generators.size()));
  if (r.status == LpResult::Status::Infeasible) return out;
  out.member = true;
  out.coefficients = r.x;
  return out;
}

std::vector<std::size_t> positive_envelope(const QVec& target, const std::vector<QVec>& generators) {
  QMat a = generator_matrix(target, generators);
  ConeMembership m = cone_membership(target, generators);
  if (!m.member) throw NotInCone("target " + format_vector(target) + " is not in the cone of the generators");
  std::size_t n = generators.size();
  std::vector<bool> positive(n, false);
  for (std::size_t i = 0; i < n; ++i)
    if (sgn(m.coefficients[i]) > 0) positive[i] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (positive[i]) continue;
    QVec c = zero_vec(n);
    c[i] = 1;
    LpResult r = lp_maximize(a, target, c);
    if (r.status == LpResult::Status::Unbounded || (r.status == LpResult::Status::Optimal && sgn(r.value) > 0)) {
      positive[i] = true;
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(r.x[j]) > 0) positive[j] = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (positive[i]) out.push_back(i);
  return out;
}

namespace {

QVec combine(const std::vector<QVec>& basis, const QVec& coords, std::size_t dim) {
  QVec x = zero_vec(dim);
  for (std::size_t t = 0; t < basis.size(); ++t) axpy(x, coords[t], basis[t]);
  return x;
}

// Double description for a cone { z : <a_k, z> >= 0 } whose inequalities
// have full rank r = z.size(). Returns primitive rays in z coordinates.
std::vector<QVec> pointed_rays(const std::vector<QVec>& ineqs, std::size_t r) {
  std::vector<std::size_t> init = independent_subset(ineqs, r);
  QMat m;
  for (auto i : init) m.push_back(ineqs[i]);

  struct Ray {
    QVec z;
    std::vector<std::size_t> tight;  // processed inequality indices with <a,z> = 0
  };
  std::vector<Ray> rays;
  for (std::size_t t = 0; t < r; ++t) {
    auto col = solve_square(m, unit_vec(r, t));
    Ray ray{primitive(*col), {}};
    rays.push_back(std::move(ray));
  }
  std::vector<std::size_t> processed;
  auto add_processed = [&](std::size_t k) {
    processed.push_back(k);
    for (auto& ray : rays)
      if (sgn(dot(ineqs[k], ray.z)) == 0) {
        ray.tight.push_back(k);
        std::sort(ray.tight.begin(), ray.tight.end());
      }
  };
  for (auto k : init) add_processed(k);

  std::set<std::size_t> in_init(init.begin(), init.end());
  for (std::size_t k = 0; k < ineqs.size(); ++k) {
    if (in_init.count(k)) continue;
    const QVec& a = ineqs[k];
    std::vector<std::size_t> pos, zer, negs;
    std::vector<Q> val(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(a, rays[i].z);
      int s = sgn(val[i]);
      (s > 0 ? pos : s == 0 ? zer : negs).push_back(i);
    }
    if (negs.empty()) {
      add_processed(k);
      continue;
    }
    std::vector<Ray> next;
    for (auto i : pos) next.push_back(rays[i]);
    for (auto i : zer) next.push_back(rays[i]);
    for (auto p : pos) {
      for (auto n : negs) {
        std::vector<std::size_t> common;
        std::set_intersection(rays[p].tight.begin(), rays[p].tight.end(), rays[n].tight.begin(),
                              rays[n].tight.end(), std::back_inserter(common));
        if (common.size() + 2 < r) continue;
        std::vector<QVec> rowsv;
        for (auto c : common) rowsv.push_back(ineqs[c]);
        if (r < 2) continue;
        if (r > 2 && rank_of_span(rowsv) != static_cast<int>(r) - 2) continue;
        QVec z = zero_vec(r);
        axpy(z, val[p], rays[n].z);
        axpy(z, -val[n], rays[p].z);
        next.push_back(Ray{primitive(z), common});
      }
    }
    rays = std::move(next);
    processed.push_back(k);
    for (auto& ray : rays) {
      if (sgn(dot(a, ray.z)) == 0 && (ray.tight.empty() || ray.tight.back() != k)) ray.tight.push_back(k);
      std::sort(ray.tight.begin(), ray.tight.end());
      ray.tight.erase(std::unique(ray.tight.begin(), ray.tight.end()), ray.tight.end());
    }
  }
  std::vector<QVec> out;
  for (auto& ray : rays) out.push_back(ray.z);
  return out;
}

}  // namespace

RaySet extreme_rays(const ConeDescription& cone) {
  std::size_t d = cone.ambient_dim;
  for (const auto& v : cone.inequalities)
    if (v.size() != d) throw DimensionMismatch("cone inequality length differs from ambient dimension");

  std::vector<QVec> basis;
  if (cone.subspace_basis) {
    for (const auto& v : *cone.subspace_basis)
      if (v.size() != d) throw DimensionMismatch("cone subspace vector length differs from ambient dimension");
    for (auto i : independent_subset(*cone.subspace_basis, d)) basis.push_back((*cone.subspace_basis)[i]);
  } else {
    for (std::size_t i = 0; i < d; ++i) basis.push_back(unit_vec(d, i));
  }
  std::size_t m = basis.size();

  std::vector<QVec> ys;
  for (const auto& v : cone.inequalities) {
    QVec y(m);
    for (std::size_t j = 0; j < m; ++j) y[j] = dot(v, basis[j]);
    if (!is_zero(y)) ys.push_back(std::move(y));
  }

  RaySet out;
  for (const auto& l : kernel_basis(ys, m)) out.lineality.push_back(primitive(combine(basis, l, d)));

  Echelon e = rref(ys, m);
  std::vector<QVec> row_basis = e.rows;
  std::size_t r = row_basis.size();
  if (r > 0) {
    std::vector<QVec> zs;
    for (const auto& y : ys) {
      QVec z(r);
      for (std::size_t t = 0; t < r; ++t) z[t] = dot(y, row_basis[t]);
      zs.push_back(std::move(z));
    }
    for (const auto& z : pointed_rays(zs, r)) {
      QVec y = combine(row_basis, z, m);
      out.rays.push_back(primitive(combine(basis, y, d)));
    }
  }
  std::sort(out.rays.begin(), out.rays.end(), QVecLess{});
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  return out;
}

bool cone_contains(const ConeDescription& cone, const QVec& x) {
  if (x.size() != cone.ambient_dim) throw DimensionMismatch("cone_contains: length mismatch");
  for (const auto& v : cone.inequalities)
    if (sgn(dot(v, x)) < 0) return false;
  if (cone.subspace_basis) {
    std::vector<QVec> vs = *cone.subspace_basis;
    int r0 = vs.empty() ? 0 : rank_of_span(vs);
    vs.push_back(x);
    if (rank_of_span(vs) != r0) return false;
  }
  return true;
}

Positivity positive_on_cone(const QVec& functional, const ConeDescription& cone) {
  if (functional.size() != cone.ambient_dim) throw DimensionMismatch("positive_on_cone: functional length mismatch");
  Positivity p;
  p.rays = extreme_rays(cone);
  for (const auto& l : p.rays.lineality) {
    Q v = dot(functional, l);
    if (sgn(v) != 0) {
      p.positive = false;
      p.witness = sgn(v) < 0 ? l : neg(l);
      p.witness_in_lineality = true;
      return p;
    }
  }
  p.lineality_quotiented = !p.rays.lineality.empty();
  p.positive = true;
  for (const auto& r : p.rays.rays) {
    Q v = dot(functional, r);
    p.values.push_back(v);
    if (sgn(v) <= 0 && p.positive) {
      p.positive = false;
      p.witness = r;
    }
  }
  return p;
}

}  // namespace pvsa
