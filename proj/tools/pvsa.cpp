#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pvsa/io.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kParse = 2, kCap = 3, kInvariant = 4 };

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::vector<long> heights;
  std::optional<std::size_t> max_weights;
  std::string out;
  std::string format = "json";
  int jobs = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Seed for the regularity oracle");
  cmd->add_option("--trials", c.trials, "Random evaluations per Minset test")->check(CLI::PositiveNumber);
  cmd->add_option("--heights", c.heights, "Sampling heights, e.g. --heights 10 100 1000")->check(CLI::PositiveNumber);
  cmd->add_option("--max-weights", c.max_weights, "Cap on |Psi_V| for subset enumeration")->check(CLI::Range(1, 64));
  cmd->add_option("--out", c.out, "Write the report here instead of stdout");
  cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--jobs", c.jobs, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
}

std::vector<int> parse_labels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw pvsa::ParseError("h", "malformed label '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<pvsa::Q> parse_mu(const std::string& text) {
  std::vector<pvsa::Q> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(pvsa::parse_rational(item));
    } catch (const std::invalid_argument& e) {
      throw pvsa::ParseError("--mu", e.what());
    }
  }
  return out;
}

pvsa::Caps caps_from(const Common& c, pvsa::Caps base) {
  if (c.trials) base.trials = *c.trials;
  if (!c.heights.empty()) base.heights = c.heights;
  if (c.max_weights) base.max_weights = *c.max_weights;
  return base;
}

bool caps_overridden(const Common& c) { return c.trials || !c.heights.empty() || c.max_weights; }

pvsa::InstanceFile load(const std::string& path, const Common& c) {
  auto file = pvsa::load_instance(path);
  if (caps_overridden(c) || c.seed) {
    pvsa::Caps caps = caps_from(c, file.instance.caps);
    file = pvsa::load_instance(path, &caps);
    if (c.seed) {
      file.instance.seed = *c.seed;
      pvsa::finalize(file.instance);
    }
  }
  return file;
}

void emit(const pvsa::Json& report, const Common& c) {
  std::string body = c.format == "text" ? pvsa::render_text(report) : report.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Special subspaces, exceptional pairs and convergence certificates for prehomogeneous vector spaces"};
  app.set_version_flag("--version", std::string(pvsa::kToolVersion));
  app.require_subcommand(1);

  Common analyze_opts, dk_opts, ifd_opts;
  std::string analyze_path, ifd_path, dk_type, dk_h;
  std::vector<std::string> mu_args;

  auto* analyze = app.add_subcommand("analyze", "Enumerate Spcl(V) and certify every special subspace");
  analyze->add_option("instance", analyze_path, "Instance file (JSON)")->required();
  analyze->add_option("--mu", mu_args, "Extra mu as rational coefficients over Sigma, e.g. --mu 1/2,1");
  add_common(analyze, analyze_opts);

  auto* dk = app.add_subcommand("dk", "Emit the DK-type instance of a grading");
  dk->add_option("type", dk_type, "Ambient root datum, e.g. F4 or GL7")->required();
  dk->add_option("labels", dk_h, "Labels on the simple roots, e.g. 0,2,0,0")->required();
  add_common(dk, dk_opts);

  auto* ifd = app.add_subcommand("ifd", "Standardize the induced filtration data of an instance");
  ifd->add_option("instance", ifd_path, "Instance file with an ifd list")->required();
  add_common(ifd, ifd_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*analyze) {
      auto file = load(analyze_path, analyze_opts);
      pvsa::AnalyzeOptions opts;
      opts.jobs = analyze_opts.jobs;
      for (const auto& m : mu_args) opts.extra_mu.push_back(parse_mu(m));
      emit(pvsa::analyze_report(file, opts), analyze_opts);
    } else if (*dk) {
      auto datum = pvsa::build_root_datum(dk_type);
      auto h = parse_labels(dk_h);
      pvsa::DkOptions opts;
      opts.seed = dk_opts.seed.value_or(1);
      opts.caps = caps_from(dk_opts, opts.caps);
      opts.attach_oracle = false;
      auto inst = pvsa::build_dk_pvs(datum, h, opts);
      inst.name = dk_type + "[" + dk_h + "]";
      auto note = pvsa::attach_builtin_oracle(inst, h);
      pvsa::finalize(inst);
      if (inst.psi_v.empty()) std::cerr << "warning: empty V, no positive root has grade 2\n";
      emit(pvsa::dk_report(inst, h, note), dk_opts);
    } else if (*ifd) {
      auto file = load(ifd_path, ifd_opts);
      if (file.ifds.empty()) throw pvsa::ParseError("ifd", "the instance has no ifd list");
      emit(pvsa::ifd_report(file, ifd_opts.jobs), ifd_opts);
    }
  } catch (const pvsa::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const pvsa::InvalidMu& e) {
    std::cerr << "parse error: --mu: " << e.what() << "\n";
    return kParse;
  } catch (const pvsa::UnsupportedType& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const pvsa::NonDominant& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const pvsa::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const pvsa::WeylTooLarge& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const pvsa::InvariantViolation& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOk;
}
