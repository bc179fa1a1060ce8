#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "pvsa/rational.hpp"

namespace pvsa {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotInCone : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reduced row echelon form. `pivots[r]` is the pivot column of row r.
struct Echelon {
  QMat rows;
  std::vector<std::size_t> pivots;
};

Echelon rref(QMat m, std::size_t ncols);

int rank_of_span(const std::vector<QVec>& vectors);

// Basis of { x : <v,x> = 0 for all v }, primitive integer vectors.
std::vector<QVec> kernel_basis(const std::vector<QVec>& vectors, std::size_t dim);

// Linearly independent subset (greedy, in order); returns indices.
std::vector<std::size_t> independent_subset(const std::vector<QVec>& vectors, std::size_t dim);

// Solves M x = b for square invertible M; nullopt when singular.
std::optional<QVec> solve_square(const QMat& m, const QVec& b);

struct LpResult {
  enum class Status { Infeasible, Unbounded, Optimal };
  Status status = Status::Infeasible;
  Q value;
  QVec x;
};

// maximize c.x subject to A x = b, x >= 0. Columns of A are the variables.
// Two-phase tableau simplex with Bland's rule.
LpResult lp_maximize(const QMat& a, const QVec& b, const QVec& c);

struct ConeMembership {
  bool member = false;
  QVec coefficients;  // nonnegative, reproduces the target when member
};

ConeMembership cone_membership(const QVec& target, const std::vector<QVec>& generators);

// Indices i whose coefficient can be made positive in some nonnegative
// representation of target. Throws NotInCone.
std::vector<std::size_t> positive_envelope(const QVec& target, const std::vector<QVec>& generators);

struct ConeDescription {
  std::size_t ambient_dim = 0;
  std::vector<QVec> inequalities;                  // <v,x> >= 0
  std::optional<std::vector<QVec>> subspace_basis;  // spanning set of W
};

struct RaySet {
  std::vector<QVec> rays;       // primitive, sorted, pairwise non-proportional
  std::vector<QVec> lineality;  // primitive basis of the lineality space
  bool pointed() const { return lineality.empty(); }
};

RaySet extreme_rays(const ConeDescription& cone);

bool cone_contains(const ConeDescription& cone, const QVec& x);

struct Positivity {
  bool positive = false;
  std::optional<QVec> witness;  // nonzero element of the cone with <f,w> <= 0
  bool witness_in_lineality = false;
  bool lineality_quotiented = false;
  RaySet rays;
  std::vector<Q> values;  // <f,r> per ray
};

Positivity positive_on_cone(const QVec& functional, const ConeDescription& cone);

}  // namespace pvsa
