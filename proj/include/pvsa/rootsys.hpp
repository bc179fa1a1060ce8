#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvsa/rational.hpp"

namespace pvsa {

struct UnsupportedType : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct WeylTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Subset of the simple roots of a datum, as a bit set.
class ParabolicIndex {
 public:
  ParabolicIndex() = default;
  explicit ParabolicIndex(std::uint64_t bits) : bits_(bits) {}
  static ParabolicIndex of(const std::vector<int>& indices);
  static ParabolicIndex full(std::size_t rank);

  bool contains(int i) const { return (bits_ >> i) & 1U; }
  std::uint64_t bits() const { return bits_; }
  std::vector<int> indices() const;
  std::size_t size() const;
  bool subset_of(ParabolicIndex o) const { return (bits_ & ~o.bits_) == 0; }
  ParabolicIndex operator&(ParabolicIndex o) const { return ParabolicIndex(bits_ & o.bits_); }
  ParabolicIndex operator|(ParabolicIndex o) const { return ParabolicIndex(bits_ | o.bits_); }
  bool operator==(const ParabolicIndex& o) const { return bits_ == o.bits_; }
  bool operator!=(const ParabolicIndex& o) const { return bits_ != o.bits_; }
  // "(*00*)": one symbol per simple root of the datum.
  std::string pattern(std::size_t rank) const;

 private:
  std::uint64_t bits_ = 0;
};

struct Factor {
  std::string type;  // "A","B","C","D","E","F","G","GL","T"
  int rank = 0;      // number of simple roots contributed
  int simple_offset = 0;
  int coord_offset = 0;
  int dim = 0;
};

struct RootDatum {
  std::string type_label;
  std::size_t ambient_dim = 0;
  std::vector<QVec> simple_roots;
  std::vector<QVec> simple_coroots;
  std::vector<QVec> positive_roots;            // ordered by height, then coefficients
  std::vector<std::vector<int>> root_coeffs;   // coefficients in simple roots
  std::vector<int> multiplicity;               // always 1 for split data
  std::vector<std::vector<int>> cartan;        // cartan[i][j] = <alpha_i, alpha_j^vee>
  QMat cochar_gram;                            // W-invariant form on cocharacters
  std::vector<Factor> factors;

  std::size_t rank() const { return simple_roots.size(); }
  // +(i+1) for positive root i, -(i+1) for its negative, 0 if not a root.
  int root_id(const QVec& v) const;
  bool is_root(const QVec& v) const { return root_id(v) != 0; }
  bool is_positive_root(const QVec& v) const { return root_id(v) > 0; }
  QVec coroot_of(std::size_t positive_index) const;
  QVec delta0() const;

  std::map<QVec, int, QVecLess> index;  // filled by the builder
};

RootDatum build_root_datum(const std::string& spec);

// Levi and nilradical positive roots of a standard parabolic, plus the sum of
// the Levi positive roots.
struct ParabolicRoots {
  std::vector<int> levi;
  std::vector<int> nilradical;
  QVec delta0_levi;
};

ParabolicRoots positive_roots_of(const RootDatum& datum, ParabolicIndex parabolic);

// Positive roots supported on the given simple roots.
std::vector<int> roots_supported_on(const RootDatum& datum, ParabolicIndex subset);

// w = s_{word[0]} s_{word[1]} ... s_{word[k-1]}
struct WeylElement {
  std::vector<int> word;
  bool operator==(const WeylElement& o) const { return word == o.word; }
};

QVec reflect(const RootDatum& datum, int i, const QVec& chi);
QVec reflect_cochar(const RootDatum& datum, int i, const QVec& x);
QVec act(const RootDatum& datum, const WeylElement& w, const QVec& chi);
QVec act_inverse(const RootDatum& datum, const WeylElement& w, const QVec& chi);
QVec act_cochar(const RootDatum& datum, const WeylElement& w, const QVec& x);
QMat action_matrix(const RootDatum& datum, const WeylElement& w);  // columns = images of unit vectors
std::size_t length(const RootDatum& datum, const WeylElement& w);   // inversion count
WeylElement inverse(const WeylElement& w);
WeylElement multiply(const WeylElement& a, const WeylElement& b);
WeylElement reduce(const RootDatum& datum, const WeylElement& w);   // reduced word for the same element

std::uint64_t weyl_order(const RootDatum& datum);
constexpr std::uint64_t kWeylEnumerationCap = 2903040;  // |W(E7)|

// Visits every element once (depth-first over canonical reduced words).
// `prune(x)` sees x = w(delta0) in integer coordinates; returning true skips
// the subtree. The visitor returns false to stop.
void for_each_weyl(const RootDatum& datum, const std::function<bool(const WeylElement&)>& visit,
                   const std::function<bool(const std::vector<long>&)>& prune = {});

std::vector<WeylElement> weyl_group(const RootDatum& datum);

// Minimal-length representatives of W_left \ W / W_right (no left descent in
// `left`, no right descent in `right`), in depth-first order.
std::vector<WeylElement> minimal_double_coset_reps(const RootDatum& datum, ParabolicIndex left, ParabolicIndex right);

// Unique element of minimal length in W_left w W_right.
WeylElement min_double_coset_rep(const RootDatum& datum, const WeylElement& w, ParabolicIndex left,
                                 ParabolicIndex right);

bool has_left_descent_in(const RootDatum& datum, const WeylElement& w, ParabolicIndex set);
bool has_right_descent_in(const RootDatum& datum, const WeylElement& w, ParabolicIndex set);

}  // namespace pvsa
