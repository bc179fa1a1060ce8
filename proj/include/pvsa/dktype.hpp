#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvsa/pvscore.hpp"
#include "pvsa/rootsys.hpp"

namespace pvsa {

struct NonDominant : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InconsistentIfd : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct AmbiguityError : InvariantViolation {
  using InvariantViolation::InvariantViolation;
};

struct DkOptions {
  bool attach_oracle = true;
  std::uint64_t seed = 1;
  Caps caps;
};

// labels[i] = <alpha_i, h> on the simple roots of the ambient group.
PvsInstance build_dk_pvs(const RootDatum& ambient, const std::vector<int>& labels, const DkOptions& opts = {});

// Attaches a built-in relative invariant to a DK instance when the grading has
// one of the recognized shapes. Returns a short description, or nullopt.
std::optional<std::string> attach_builtin_oracle(PvsInstance& inst, const std::vector<int>& labels);

struct IfdSpec {
  std::string label;
  ParabolicIndex q;
  std::vector<int> hl;  // aligned with q.indices()
};

std::vector<int> ifd_to_grading(const RootDatum& ambient, const IfdSpec& ifd);

// Cocharacter x with <alpha_i, x> = labels[i].
QVec grading_cochar(const RootDatum& ambient, const std::vector<int>& labels);

struct Filtration {
  std::vector<int> labels;
  std::vector<int> grade;  // per positive root of the ambient datum
  bool bracket_closed = true;
  // Signed root ids (+(k+1) / -(k+1)) of F_i, plus whether 0 lies in F_i.
  std::vector<int> piece(int i) const;
  bool contains_zero(int i) const { return i <= 0; }
};

Filtration ifiltration_pieces(const RootDatum& ambient, const std::vector<int>& labels);

enum class StandardizeStatus { Found, NotFound };

struct StandardizeResult {
  StandardizeStatus status = StandardizeStatus::NotFound;
  WeylElement w;
  Mask u = 0;
  ParabolicIndex predicted_stab;
  std::size_t candidates = 0;
  std::size_t admissible = 0;
  std::size_t passing = 0;
  // The unconjugated filtration.
  bool identity_admissible = false;
  Mask identity_u = 0;
  MinsetStatus identity_minset = MinsetStatus::Unknown;
  // Consistency of the found subspace with the special-subspace pipeline.
  std::optional<SpecialReport> special;
  bool stab_matches = false;
};

struct StandardizeOptions {
  int jobs = 0;
  bool serial = false;
};

// Throws AmbiguityError if two passing Weyl elements give different subspaces.
StandardizeResult standardize_ifiltration(const RootDatum& ambient, const PvsInstance& target,
                                          const std::vector<int>& tilde_labels, const StandardizeOptions& opts = {});

StandardizeResult richardson_special(const RootDatum& ambient, ParabolicIndex q, const PvsInstance& target,
                                     const StandardizeOptions& opts = {});

}  // namespace pvsa
