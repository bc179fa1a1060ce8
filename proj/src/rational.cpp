#include "pvsa/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace pvsa {

Q parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw std::invalid_argument("empty rational");
  if (s.front() == '+') s.erase(s.begin());
  auto valid = [](const std::string& part) {
    std::size_t i = (!part.empty() && part[0] == '-') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num) || !valid(den) || den[0] == '-')
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  Z d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Q q(Z(num), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Q& q) { return q.get_str(); }

QVec zero_vec(std::size_t n) { return QVec(n, Q(0)); }

QVec unit_vec(std::size_t n, std::size_t i) {
  QVec v(n, Q(0));
  v.at(i) = 1;
  return v;
}

QVec from_ints(const std::vector<long>& xs) {
  QVec v;
  v.reserve(xs.size());
  for (long x : xs) v.emplace_back(x);
  return v;
}

Q dot(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Q s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

QVec add(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: length mismatch");
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVec sub(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: length mismatch");
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QVec scale(const Q& s, const QVec& a) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

QVec neg(const QVec& a) { return scale(Q(-1), a); }

void axpy(QVec& y, const Q& s, const QVec& x) {
  if (y.size() != x.size()) throw std::invalid_argument("axpy: length mismatch");
  if (sgn(s) == 0) return;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (sgn(x[i]) != 0) y[i] += s * x[i];
}

bool is_zero(const QVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Q& q) { return sgn(q) == 0; });
}

Z common_denominator(const QVec& v) {
  Z l = 1;
  for (const Q& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

QVec primitive(const QVec& v) {
  if (is_zero(v)) return v;
  Z l = common_denominator(v);
  Z g = 0;
  std::vector<Z> ints(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    ints[i] = v[i].get_num() * (l / v[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  QVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Q(ints[i] / g);
  return r;
}

std::string format_vector(const QVec& v) {
  Z l = common_denominator(v);
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    Z n = v[i].get_num() * (l / v[i].get_den());
    out += n.get_str();
  }
  out += ")";
  if (l != 1) out += "/" + l.get_str();
  return out;
}

std::vector<long> to_longs(const QVec& v) {
  std::vector<long> r;
  r.reserve(v.size());
  for (const Q& q : v) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
      throw std::invalid_argument("to_longs: entry " + q.get_str() + " is not a small integer");
    r.push_back(q.get_num().get_si());
  }
  return r;
}

bool QVecLess::operator()(const QVec& a, const QVec& b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const Q& x, const Q& y) { return cmp(x, y) < 0; });
}

}  // namespace pvsa
