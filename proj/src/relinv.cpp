#include "pvsa/relinv.hpp"

#include <functional>
#include <map>

#include "pvsa/random.hpp"

namespace pvsa {

namespace {

const std::map<std::string, OracleKind>& kind_names() {
  static const std::map<std::string, OracleKind> names = {
      {"gl_chain", OracleKind::GlChain},
      {"sp_chain", OracleKind::SpChain},
      {"sym_chain", OracleKind::SymChain},
      {"so_chain", OracleKind::SoChain},
      {"skew_chain", OracleKind::SkewChain},
      {"binary_cubic_disc_sym3", OracleKind::BinaryCubicSym3},
      {"binary_cubic_disc_mat3", OracleKind::BinaryCubicMat3},
      {"custom_polynomial", OracleKind::CustomPolynomial},
  };
  return names;
}

enum class Storage { General, Symmetric, Skew };

struct MatrixShape {
  int rows;
  int cols;
  Storage storage;
};

std::vector<MatrixShape> matrix_shapes(const OracleSpec& spec) {
  const auto& n = spec.shape;
  std::vector<MatrixShape> out;
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw ShapeMismatch(std::string("oracle shape: ") + what);
  };
  for (int x : n) need(x >= 0, "negative block size");
  switch (spec.kind) {
    case OracleKind::GlChain:
      need(n.size() >= 2, "gl_chain needs at least two blocks");
      for (std::size_t i = 0; i + 1 < n.size(); ++i) out.push_back({n[i], n[i + 1], Storage::General});
      break;
    case OracleKind::SpChain:
    case OracleKind::SoChain:
      need(n.size() >= 2, "sp_chain/so_chain need n_1..n_k and the size of the form");
      for (std::size_t i = 0; i + 1 < n.size(); ++i) out.push_back({n[i], n[i + 1], Storage::General});
      break;
    case OracleKind::SymChain:
    case OracleKind::SkewChain:
      need(!n.empty(), "sym_chain/skew_chain need at least one block");
      for (std::size_t i = 0; i + 1 < n.size(); ++i) out.push_back({n[i], n[i + 1], Storage::General});
      out.push_back({n.back(), n.back(), spec.kind == OracleKind::SymChain ? Storage::Symmetric : Storage::Skew});
      break;
    case OracleKind::BinaryCubicSym3:
      out.assign(2, {3, 3, Storage::Symmetric});
      break;
    case OracleKind::BinaryCubicMat3:
      out.assign(2, {3, 3, Storage::General});
      break;
    case OracleKind::CustomPolynomial:
      break;
  }
  return out;
}

QMat zero_mat(int r, int c) { return QMat(static_cast<std::size_t>(r), QVec(static_cast<std::size_t>(c), Q(0))); }

QMat mul(const QMat& a, const QMat& b) {
  std::size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
  QMat out(r, QVec(c, Q(0)));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (sgn(a[i][t]) == 0) continue;
      for (std::size_t j = 0; j < c; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  return out;
}

QMat transpose(const QMat& a) {
  if (a.empty()) return {};
  QMat t(a[0].size(), QVec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

std::vector<QMat> fill_matrices(const OracleSpec& spec, const std::vector<MatrixShape>& shapes, const QVec& point) {
  std::vector<QMat> m;
  for (const auto& s : shapes) m.push_back(zero_mat(s.rows, s.cols));
  for (std::size_t slot = 0; slot < spec.layout.size(); ++slot) {
    const auto& ref = spec.layout[slot];
    const auto& s = shapes[static_cast<std::size_t>(ref.matrix)];
    auto& mat = m[static_cast<std::size_t>(ref.matrix)];
    mat[ref.row][ref.col] = point[slot];
    if (s.storage == Storage::Symmetric) mat[ref.col][ref.row] = point[slot];
    if (s.storage == Storage::Skew) mat[ref.col][ref.row] = -point[slot];
  }
  return m;
}

QMat chain_product(const std::vector<QMat>& x, std::size_t from, std::size_t to) {
  QMat p = x[from];
  for (std::size_t j = from + 1; j <= to; ++j) p = mul(p, x[j]);
  return p;
}

Q eval_polynomial(const Polynomial& poly, const QVec& point) {
  Q total = 0;
  for (const auto& mono : poly) {
    Q term = mono.coeff;
    for (auto [slot, e] : mono.powers) {
      Q v = point.at(static_cast<std::size_t>(slot));
      for (int k = 0; k < e; ++k) term *= v;
    }
    total += term;
  }
  return total;
}

Q cubic_from_pencil(const QMat& a0, const QMat& a1) {
  auto f = [&](long s, long t) {
    QMat m(3, QVec(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = Q(s) * a0[i][j] + Q(t) * a1[i][j];
    return determinant(m);
  };
  Q a = f(1, 0), d = f(0, 1), p = f(1, 1), m = f(1, -1);
  Q b_plus_c = p - a - d;
  Q b_minus_c = a - d - m;
  Q b = (b_plus_c + b_minus_c) / 2;
  Q c = (b_plus_c - b_minus_c) / 2;
  return cubic_discriminant(a, b, c, d);
}

}  // namespace

std::string to_string(OracleKind kind) {
  for (const auto& [name, k] : kind_names())
    if (k == kind) return name;
  return "unknown";
}

OracleKind parse_oracle_kind(const std::string& name) {
  auto it = kind_names().find(name);
  if (it == kind_names().end()) throw ShapeMismatch("unknown oracle kind '" + name + "'");
  return it->second;
}

QMat default_form(OracleKind kind, std::size_t n) {
  QMat j(n, QVec(n, Q(0)));
  for (std::size_t c = 0; c + 1 < n; c += 2) {
    j[c][c + 1] = 1;
    j[c + 1][c] = kind == OracleKind::SpChain ? -1 : 1;
  }
  if (n % 2 == 1 && kind == OracleKind::SoChain) j[n - 1][n - 1] = 1;
  return j;
}

void validate_oracle(const OracleSpec& spec) {
  auto shapes = matrix_shapes(spec);
  if (spec.kind == OracleKind::CustomPolynomial) {
    if (!spec.layout.empty()) throw ShapeMismatch("custom_polynomial takes no layout");
    for (const auto& p : spec.polynomials)
      for (const auto& m : p)
        for (auto [slot, e] : m.powers)
          if (slot < 0 || static_cast<std::size_t>(slot) >= spec.slot_count || e < 0)
            throw ShapeMismatch("custom_polynomial refers to slot " + std::to_string(slot));
    return;
  }
  if (spec.layout.size() != spec.slot_count)
    throw ShapeMismatch("oracle layout has " + std::to_string(spec.layout.size()) + " entries for " +
                        std::to_string(spec.slot_count) + " slots");
  std::size_t free_entries = 0;
  std::vector<std::vector<std::vector<int>>> used;
  for (const auto& s : shapes) {
    used.emplace_back(static_cast<std::size_t>(s.rows), std::vector<int>(static_cast<std::size_t>(s.cols), 0));
    if (s.storage == Storage::General) free_entries += static_cast<std::size_t>(s.rows * s.cols);
    if (s.storage == Storage::Symmetric) free_entries += static_cast<std::size_t>(s.rows * (s.rows + 1) / 2);
    if (s.storage == Storage::Skew) free_entries += static_cast<std::size_t>(s.rows * (s.rows - 1) / 2);
  }
  for (const auto& ref : spec.layout) {
    if (ref.matrix < 0 || static_cast<std::size_t>(ref.matrix) >= shapes.size())
      throw ShapeMismatch("layout refers to matrix " + std::to_string(ref.matrix));
    const auto& s = shapes[static_cast<std::size_t>(ref.matrix)];
    if (ref.row < 0 || ref.row >= s.rows || ref.col < 0 || ref.col >= s.cols)
      throw ShapeMismatch("layout entry outside matrix bounds");
    if (s.storage == Storage::Symmetric && ref.row > ref.col)
      throw ShapeMismatch("symmetric layout entries need row <= col");
    if (s.storage == Storage::Skew && ref.row >= ref.col) throw ShapeMismatch("skew layout entries need row < col");
    if (used[static_cast<std::size_t>(ref.matrix)][ref.row][ref.col]++)
      throw ShapeMismatch("layout entry used twice");
  }
  if (free_entries != spec.slot_count)
    throw ShapeMismatch("oracle shape has " + std::to_string(free_entries) + " free entries for " +
                        std::to_string(spec.slot_count) + " slots");
  const auto& n = spec.shape;
  if (spec.kind == OracleKind::GlChain) {
    std::size_t k = n.size();
    for (std::size_t i = 0; i < k; ++i)
      if (n[i] != n[k - 1 - i]) throw ShapeMismatch("gl_chain shape must be symmetric");
    for (std::size_t i = 0; i + 1 < k && 2 * (i + 1) < k; ++i)
      if (n[i] > n[i + 1]) throw ShapeMismatch("gl_chain shape must increase towards the middle");
  }
  if (spec.kind == OracleKind::SpChain || spec.kind == OracleKind::SkewChain) {
    for (int v : n)
      if (v % 2 != 0) throw ShapeMismatch(to_string(spec.kind) + " shape entries must be even");
  }
  if ((spec.kind == OracleKind::SpChain || spec.kind == OracleKind::SoChain) && !spec.form.empty()) {
    std::size_t m = static_cast<std::size_t>(n.back());
    if (spec.form.size() != m) throw ShapeMismatch("form has the wrong size");
    for (const auto& row : spec.form)
      if (row.size() != m) throw ShapeMismatch("form has the wrong size");
  }
}

std::size_t frip_count(const OracleSpec& spec) {
  const auto& n = spec.shape;
  switch (spec.kind) {
    case OracleKind::GlChain: {
      std::size_t c = 0;
      for (std::size_t i = 0; i + 1 < n.size(); ++i)
        if (n[i] <= n[i + 1]) ++c;
      return c;
    }
    case OracleKind::SpChain:
    case OracleKind::SoChain:
      return n.size() - 1;
    case OracleKind::SymChain:
    case OracleKind::SkewChain:
      return n.size();
    case OracleKind::BinaryCubicSym3:
    case OracleKind::BinaryCubicMat3:
      return 1;
    case OracleKind::CustomPolynomial:
      return spec.polynomials.size();
  }
  return 0;
}

std::vector<Q> evaluate_frips(const OracleSpec& spec, const QVec& point) {
  if (point.size() != spec.slot_count)
    throw ShapeMismatch("point has " + std::to_string(point.size()) + " coordinates, oracle expects " +
                        std::to_string(spec.slot_count));
  std::vector<Q> out;
  if (spec.kind == OracleKind::CustomPolynomial) {
    for (const auto& p : spec.polynomials) out.push_back(eval_polynomial(p, point));
    return out;
  }
  auto shapes = matrix_shapes(spec);
  auto x = fill_matrices(spec, shapes, point);
  const auto& n = spec.shape;
  switch (spec.kind) {
    case OracleKind::GlChain: {
      std::size_t k = n.size();
      for (std::size_t i = 0; i + 1 < k; ++i) {
        if (n[i] == n[i + 1]) out.push_back(determinant(x[i]));
        else if (n[i] < n[i + 1]) out.push_back(determinant(chain_product(x, i, k - 2 - i)));
      }
      break;
    }
    case OracleKind::SpChain:
    case OracleKind::SoChain: {
      std::size_t k = n.size() - 1;
      QMat j = spec.form.empty() ? default_form(spec.kind, static_cast<std::size_t>(n.back())) : spec.form;
      for (std::size_t i = 0; i < k; ++i) {
        if (n[i] == n[i + 1]) {
          out.push_back(determinant(x[i]));
          continue;
        }
        QMat p = chain_product(x, i, k - 1);
        QMat m = mul(mul(p, j), transpose(p));
        out.push_back(spec.kind == OracleKind::SpChain ? pfaffian(m) : determinant(m));
      }
      break;
    }
    case OracleKind::SymChain:
    case OracleKind::SkewChain: {
      std::size_t k = n.size();
      bool skew = spec.kind == OracleKind::SkewChain;
      for (std::size_t i = 0; i < k; ++i) {
        if (i + 1 == k) {
          out.push_back(skew ? pfaffian(x[i]) : determinant(x[i]));
        } else if (n[i] == n[i + 1]) {
          out.push_back(determinant(x[i]));
        } else {
          QMat p = chain_product(x, i, k - 2);
          QMat m = mul(mul(p, x[k - 1]), transpose(p));
          out.push_back(skew ? pfaffian(m) : determinant(m));
        }
      }
      break;
    }
    case OracleKind::BinaryCubicSym3:
    case OracleKind::BinaryCubicMat3:
      out.push_back(cubic_from_pencil(x[0], x[1]));
      break;
    case OracleKind::CustomPolynomial:
      break;
  }
  return out;
}

Q determinant(QMat m) {
  std::size_t n = m.size();
  Q det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(m[r][c]) == 0) continue;
      Q f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

Q pfaffian(const QMat& m) {
  std::size_t n = m.size();
  if (n % 2 == 1) return 0;
  if (n == 0) return 1;
  if (n > 24) throw ShapeMismatch("Pfaffian of a matrix above 24x24");
  std::vector<std::optional<Q>> memo(std::size_t{1} << n);
  // f(mask) = Pfaffian of the principal submatrix on the indices in mask.
  std::function<Q(std::uint32_t)> f = [&](std::uint32_t mask) -> Q {
    if (mask == 0) return Q(1);
    if (memo[mask]) return *memo[mask];
    int i = __builtin_ctz(mask);
    std::uint32_t rest = mask & ~(1U << i);
    Q total = 0;
    int position = 0;
    for (std::uint32_t r = rest; r; r &= r - 1) {
      int j = __builtin_ctz(r);
      if (sgn(m[i][j]) != 0) {
        Q sub = f(rest & ~(1U << j));
        if (position % 2 == 0) total += m[i][j] * sub;
        else total -= m[i][j] * sub;
      }
      ++position;
    }
    memo[mask] = total;
    return total;
  };
  return f(static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1));
}

Q cubic_discriminant(const Q& a, const Q& b, const Q& c, const Q& d) {
  return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d;
}

QVec sample_point(const std::vector<bool>& active, long height, std::uint64_t seed) {
  if (height < 1) throw std::invalid_argument("sample height must be at least 1");
  std::mt19937_64 gen(seed);
  QVec p(active.size(), Q(0));
  for (std::size_t s = 0; s < active.size(); ++s)
    if (active[s]) p[s] = draw_uniform(gen, -height, height);
  return p;
}

namespace {

QVec nonvanishing_point(const OracleSpec& spec, std::size_t index, std::uint64_t seed) {
  std::vector<bool> all(spec.slot_count, true);
  for (std::uint64_t attempt = 0; attempt < 256; ++attempt) {
    long height = attempt < 64 ? 10 : 1000;
    QVec p = sample_point(all, height, derive_seed(seed, {0x77656967ULL, index, attempt}));
    if (sgn(evaluate_frips(spec, p).at(index)) != 0) return p;
  }
  throw std::runtime_error("FRIP " + std::to_string(index) + " vanished at every sample");
}

// Exponent e with r == 2^e.
long log2_exact(const Q& r) {
  if (sgn(r) <= 0) throw std::logic_error("scaling ratio is not a power of two");
  Z num = r.get_num(), den = r.get_den();
  auto power = [](const Z& z) -> long {
    if (z == 1) return 0;
    long e = static_cast<long>(mpz_scan1(z.get_mpz_t(), 0));
    Z check = 1;
    mpz_mul_2exp(check.get_mpz_t(), check.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    if (check != z) return -1;
    return e;
  };
  long a = power(num), b = power(den);
  if (a < 0 || b < 0) throw std::logic_error("FRIP is not a relative invariant for the slot weights");
  return a - b;
}

Q power_of_two(long e) {
  Z p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e < 0 ? -e : e));
  return e < 0 ? Q(Z(1), p) : Q(p);
}

}  // namespace

QVec frip_weight(const OracleSpec& spec, const std::vector<QVec>& slot_weights, std::size_t index,
                 std::uint64_t seed) {
  if (index >= frip_count(spec)) throw std::out_of_range("FRIP index out of range");
  if (slot_weights.size() != spec.slot_count) throw ShapeMismatch("one weight per slot is required");
  if (slot_weights.empty()) return {};
  std::size_t dim = slot_weights[0].size();
  QVec p = nonvanishing_point(spec, index, seed);
  Q base = evaluate_frips(spec, p)[index];
  QVec chi(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    Z den = 1;
    for (const auto& w : slot_weights) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), w[k].get_den_mpz_t());
    QVec scaled = p;
    for (std::size_t s = 0; s < p.size(); ++s) {
      Q e = slot_weights[s][k] * den;
      scaled[s] *= power_of_two(e.get_num().get_si());
    }
    Q ratio = evaluate_frips(spec, scaled)[index] / base;
    chi[k] = Q(log2_exact(ratio)) / den;
  }
  return chi;
}

int frip_degree(const OracleSpec& spec, std::size_t index, std::uint64_t seed) {
  if (index >= frip_count(spec)) throw std::out_of_range("FRIP index out of range");
  QVec p = nonvanishing_point(spec, index, seed);
  QVec doubled = scale(Q(2), p);
  return static_cast<int>(log2_exact(evaluate_frips(spec, doubled)[index] / evaluate_frips(spec, p)[index]));
}

}  // namespace pvsa
