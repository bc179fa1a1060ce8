#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvsa/dktype.hpp"
#include "pvsa/pvscore.hpp"

namespace pvsa {

inline constexpr const char* kToolVersion = "0.3.0";

using Json = nlohmann::ordered_json;

// Malformed instance text. `where` is "line:col" for syntax errors and a
// field path such as "psi_v[3].weight" otherwise.
struct ParseError : std::runtime_error {
  ParseError(std::string where_, const std::string& what_)
      : std::runtime_error(where_ + ": " + what_), where(std::move(where_)) {}
  std::string where;
};

struct InstanceFile {
  PvsInstance instance;
  std::optional<std::string> dk_type;
  std::vector<int> dk_h;
  std::vector<IfdSpec> ifds;
};

InstanceFile parse_instance(const std::string& text, const Caps* overrides = nullptr);
InstanceFile load_instance(const std::string& path, const Caps* overrides = nullptr);

// Explicit form (root_datum, g_simple, psi_v, ...), loadable by parse_instance.
Json instance_to_json(const PvsInstance& inst, const std::vector<IfdSpec>& ifds = {});

Json rational_json(const Q& q);
Json vector_json(const QVec& v);
// Primitive integer tuple of a ray direction.
Json ray_json(const QVec& v);

struct AnalyzeOptions {
  std::vector<std::vector<Q>> extra_mu;  // coefficient lists over the fundamental characters
  int jobs = 0;
};

Json analyze_report(const InstanceFile& file, const AnalyzeOptions& opts = {});
Json ifd_report(const InstanceFile& file, int jobs = 0);
Json dk_report(const PvsInstance& inst, const std::vector<int>& h, const std::optional<std::string>& oracle_note);

// Indented "key: value" rendering of a report.
std::string render_text(const Json& report);

}  // namespace pvsa
