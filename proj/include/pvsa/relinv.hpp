#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pvsa/rational.hpp"

namespace pvsa {

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class OracleKind {
  GlChain,
  SpChain,
  SymChain,
  SoChain,
  SkewChain,
  BinaryCubicSym3,
  BinaryCubicMat3,
  CustomPolynomial,
};

std::string to_string(OracleKind kind);
OracleKind parse_oracle_kind(const std::string& name);

// Position of one coordinate slot inside the matrix family of the oracle.
struct SlotRef {
  int matrix = 0;
  int row = 0;
  int col = 0;
};

struct Monomial {
  Q coeff;
  std::vector<std::pair<int, int>> powers;  // (slot, exponent)
};
using Polynomial = std::vector<Monomial>;

// Matrix families by kind (shape = n_1..n_k):
//   GlChain    x_i : n_i x n_{i+1}, i = 1..k-1
//   SpChain    x_i : n_i x n_{i+1}, i = 1..k-1, with a skew form on the last space
//   SoChain    as SpChain with a symmetric form
//   SymChain   x_i : n_i x n_{i+1} for i < k, x_k symmetric n_k x n_k
//   SkewChain  x_i : n_i x n_{i+1} for i < k, x_k skew n_k x n_k (layout uses row < col)
//   BinaryCubicSym3 / BinaryCubicMat3   two 3x3 matrices A_0, A_1 (symmetric or general)
//   CustomPolynomial   no matrices; `polynomials` in slot variables
struct OracleSpec {
  OracleKind kind = OracleKind::CustomPolynomial;
  std::vector<int> shape;
  std::vector<SlotRef> layout;  // one entry per slot
  QMat form;                    // J for SpChain/SoChain; default if empty
  std::vector<Polynomial> polynomials;
  std::size_t slot_count = 0;
};

// Checks shape/layout consistency; every free matrix entry must be covered by
// exactly one slot. Throws ShapeMismatch.
void validate_oracle(const OracleSpec& spec);

std::size_t frip_count(const OracleSpec& spec);

std::vector<Q> evaluate_frips(const OracleSpec& spec, const QVec& point);

QMat default_form(OracleKind kind, std::size_t n);

Q determinant(QMat m);
Q pfaffian(const QMat& m);
// disc(a x^3 + b x^2 y + c x y^2 + d y^3)
Q cubic_discriminant(const Q& a, const Q& b, const Q& c, const Q& d);

// Integer coordinates uniform in [-height, height] on the active slots, zero
// elsewhere.
QVec sample_point(const std::vector<bool>& active, long height, std::uint64_t seed);

// Torus character of FRIP `index`, given the weight of every slot.
QVec frip_weight(const OracleSpec& spec, const std::vector<QVec>& slot_weights, std::size_t index,
                 std::uint64_t seed = 1);
int frip_degree(const OracleSpec& spec, std::size_t index, std::uint64_t seed = 1);

}  // namespace pvsa
