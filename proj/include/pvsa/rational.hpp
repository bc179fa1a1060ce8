#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pvsa {

using Q = mpq_class;
using Z = mpz_class;
using QVec = std::vector<Q>;
using QMat = std::vector<QVec>;

Q parse_rational(std::string_view text);
std::string to_string(const Q& q);

QVec zero_vec(std::size_t n);
QVec unit_vec(std::size_t n, std::size_t i);
QVec from_ints(const std::vector<long>& xs);

Q dot(const QVec& a, const QVec& b);
QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const Q& s, const QVec& a);
QVec neg(const QVec& a);
void axpy(QVec& y, const Q& s, const QVec& x);  // y += s*x
bool is_zero(const QVec& v);

// Scales v by a positive rational so that the result has integer entries
// with gcd 1. The zero vector is returned unchanged.
QVec primitive(const QVec& v);
// Least common multiple of all denominators.
Z common_denominator(const QVec& v);

// "(1,-2,3)" for integral vectors, "(1,-2,3)/2" otherwise.
std::string format_vector(const QVec& v);
std::vector<long> to_longs(const QVec& v);  // entries must be small integers

struct QVecLess {
  bool operator()(const QVec& a, const QVec& b) const;
};

}  // namespace pvsa
