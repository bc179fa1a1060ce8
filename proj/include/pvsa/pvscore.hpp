#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pvsa/exactla.hpp"
#include "pvsa/rational.hpp"
#include "pvsa/relinv.hpp"
#include "pvsa/rootsys.hpp"

namespace pvsa {

struct InvalidInstance : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidMu : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Subsets of Psi_V, bit j = weight j.
using Mask = std::uint64_t;

struct Caps {
  std::size_t max_weights = 24;
  int trials = 32;
  std::vector<long> heights = {10, 100, 1000};
};

struct PvsInstance {
  std::string name;
  RootDatum datum;
  ParabolicIndex g_simple;
  std::vector<QVec> psi_v;
  std::vector<int> mult;
  std::vector<QVec> xstar_g;
  std::vector<QVec> fund_chars;
  std::optional<OracleSpec> oracle;
  std::vector<std::vector<int>> components;  // declared partition of Psi_V, may be empty
  std::uint64_t seed = 0;
  Caps caps;

  // Filled by finalize().
  std::vector<int> phi_g_plus;     // indices into datum.positive_roots
  std::vector<QVec> g_roots;       // slot 2p = +phi_g_plus[p], slot 2p+1 = its negative
  std::vector<int> simple_slot;    // simple root i of G -> positive slot in g_roots, -1 outside G
  std::vector<std::vector<int>> shift;  // shift[j][r] = index of psi_v[j] + g_roots[r], or -1
  std::vector<std::size_t> slot_offset;
  std::size_t slot_count = 0;
  QVec delta0;
  QVec deltaV;

  std::size_t weight_count() const { return psi_v.size(); }
  Mask full_mask() const;
  std::vector<QVec> delta0_g() const;  // simple roots of G
};

// Validates the instance and fills the derived tables. Throws InvalidInstance.
void finalize(PvsInstance& inst);

std::vector<int> mask_indices(Mask m);
Mask mask_of(const std::vector<int>& indices);
int mask_size(Mask m);

QVec lambda_of(const PvsInstance& inst, Mask u);

// Root slots (into g_roots) of the parabolic of G with Levi simple roots `levi`.
std::vector<int> parabolic_slots(const PvsInstance& inst, ParabolicIndex levi);
std::vector<int> levi_slots(const PvsInstance& inst, ParabolicIndex levi);

Mask star_closure(const PvsInstance& inst, Mask u, const std::vector<int>& root_slots);
bool is_p0_stable(const PvsInstance& inst, Mask u);

// Largest standard parabolic stabilizing u; nullopt when u is not P0-stable.
std::optional<ParabolicIndex> stabilizer_of(const PvsInstance& inst, Mask u);

struct MatchPair {
  int weight = 0;  // index into psi_v
  int copy = 0;    // 0 <= copy < mult
  int root_slot = -1;  // index into g_roots, -1 for a zero slot
  int zero_slot = -1;
};

struct MatchingWitness {
  std::vector<MatchPair> pairs;
};

// Every weight slot of V matched injectively into Phi_G + (0 x ambient_dim)
// with beta + alpha in Psi_U.
std::optional<MatchingWitness> matching_full(const PvsInstance& inst, Mask u);
// Complement slots matched injectively into Phi_{N_S}.
std::optional<MatchingWitness> matching_parabolic(const PvsInstance& inst, Mask u, ParabolicIndex s);

struct Envelope {
  ParabolicIndex env;
  std::vector<int> psi_part;  // weights of Psi_U in the envelope
};

Envelope envelope_of(const PvsInstance& inst, Mask u);  // throws NotInCone
ParabolicIndex env_of(const PvsInstance& inst, Mask u);

enum class MinsetStatus { Certified, RefutedLikely, Unknown };
std::string to_string(MinsetStatus s);

struct MinsetResult {
  MinsetStatus status = MinsetStatus::Unknown;
  QVec witness;  // point with all FRIPs nonzero when certified
  int samples = 0;
};

MinsetResult minset_certify(const PvsInstance& inst, Mask u, int trials, const std::vector<long>& heights,
                            std::uint64_t seed);
MinsetResult minset_certify(const PvsInstance& inst, Mask u);

struct FundamentalCheck {
  QVec chi;
  bool rational_ok = false;
  std::optional<bool> integral_ok;  // nullopt when the bounded search gave up
  QVec rational_witness;
  std::vector<int> integral_witness;  // multiplicities over the weights of U
  std::vector<int> envelope;          // sub-U' with chi in its positive span
};

std::vector<FundamentalCheck> fundamental_cone_check(const PvsInstance& inst, Mask u);

enum class Tri { No, Yes, Unknown };
std::string to_string(Tri t);

struct ExceptionalResult {
  Tri status = Tri::No;
  Mask witness = 0;          // U'
  QVec kernel_vector;        // x annihilating X*(G), Delta_0^Stab and Psi_U'
  std::size_t flats_visited = 0;
};

ExceptionalResult is_exceptional(const PvsInstance& inst, Mask u, ParabolicIndex stab);

struct ConvergenceCertificate {
  bool positive = false;
  QVec mu;
  QVec functional;
  std::vector<QVec> w_basis;
  std::vector<QVec> ell_basis;
  Positivity positivity;
};

ConvergenceCertificate convergence_certificate(const PvsInstance& inst, Mask u, const std::vector<Q>& mu_coeffs);

struct Face {
  std::vector<QVec> rays;
  std::vector<QVec> lineality;
};
Face face_of_cone(const PvsInstance& inst, Mask u);

struct SpecialReport {
  Mask members = 0;
  bool p0_stable = false;
  ParabolicIndex stab;
  std::optional<ParabolicIndex> env;  // nullopt when lambda(U) is outside the cone
  bool dimension_match = false;
  std::optional<MatchingWitness> matching;
  MinsetStatus minset = MinsetStatus::Unknown;
  bool minset_tested = false;
  Tri special = Tri::No;
  bool lambda_identity_checked = false;
};

SpecialReport is_special(const PvsInstance& inst, Mask u);

// All P0-stable subsets (upper sets for beta -> beta + alpha), sorted.
std::vector<Mask> p0_stable_subsets(const PvsInstance& inst);

// Sorted by decreasing |Psi_U|, then by the increasing list of weight indices.
void sort_masks(std::vector<Mask>& masks);

struct EnumerateOptions {
  int jobs = 0;  // 0: OpenMP default
  bool serial = false;
};

// Specials (special == Yes) and undecided candidates (special == Unknown).
std::vector<SpecialReport> enumerate_spcl(const PvsInstance& inst, const EnumerateOptions& opts = {});
std::vector<SpecialReport> enumerate_spcl_serial(const PvsInstance& inst);

// Cover relations of the containment order; pairs (child, parent) of indices.
std::vector<std::pair<int, int>> hasse_edges(const std::vector<Mask>& spaces);

struct CfDecomposition {
  std::vector<Mask> components;
  bool declared = false;
  bool disjoint = true;
  std::vector<QVec> omegas;  // restriction of each component to a_G, in a basis of a_G
  bool independent = false;
  std::optional<bool> simple_case;  // Spcl(V) == {V}
};

CfDecomposition cf_decompose(const PvsInstance& inst, const std::vector<Mask>* spcl = nullptr);

}  // namespace pvsa
