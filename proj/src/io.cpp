#include "pvsa/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace pvsa {

namespace {

std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ParseError(path, what); }

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

Q read_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Q(Z(j.dump()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected an integer or a rational string such as \"3/2\"");
}

long read_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

QVec read_vector(const Json& j, const std::string& path, std::optional<std::size_t> length = std::nullopt) {
  if (!j.is_array()) fail(path, "expected an array");
  if (length && j.size() != *length)
    fail(path, "expected length " + std::to_string(*length) + ", got " + std::to_string(j.size()));
  QVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_rational(j[i], index_path(path, i)));
  return v;
}

std::vector<int> read_ints(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<int> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(static_cast<int>(read_int(j[i], index_path(path, i))));
  return v;
}

// 1-based simple root indices.
ParabolicIndex read_simple_set(const Json& j, const std::string& path, std::size_t rank) {
  std::vector<int> idx = read_ints(j, path);
  std::vector<int> zero_based;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 1 || static_cast<std::size_t>(idx[i]) > rank)
      fail(index_path(path, i), "simple root index must lie in 1.." + std::to_string(rank));
    zero_based.push_back(idx[i] - 1);
  }
  return ParabolicIndex::of(zero_based);
}

std::vector<QVec> read_vectors(const Json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) fail(path, "expected an array of vectors");
  std::vector<QVec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_vector(j[i], index_path(path, i), dim));
  return out;
}

OracleSpec read_oracle(const Json& j, const std::string& path, std::size_t slots) {
  if (!j.is_object()) fail(path, "expected an object");
  OracleSpec spec;
  try {
    spec.kind = parse_oracle_kind(require(j, "kind", path).get<std::string>());
  } catch (const ShapeMismatch& e) {
    fail(child(path, "kind"), e.what());
  } catch (const Json::type_error&) {
    fail(child(path, "kind"), "expected a string");
  }
  spec.slot_count = slots;
  if (j.contains("shape")) spec.shape = read_ints(j["shape"], child(path, "shape"));
  if (j.contains("layout")) {
    const auto& lay = j["layout"];
    std::string lp = child(path, "layout");
    if (!lay.is_array()) fail(lp, "expected an array of [matrix,row,col] triples");
    if (lay.size() != slots)
      fail(lp, "expected one entry per coordinate slot (" + std::to_string(slots) + "), got " +
                   std::to_string(lay.size()));
    for (std::size_t i = 0; i < lay.size(); ++i) {
      auto t = read_ints(lay[i], index_path(lp, i));
      if (t.size() != 3) fail(index_path(lp, i), "expected [matrix,row,col]");
      spec.layout.push_back({t[0], t[1], t[2]});
    }
  }
  if (j.contains("form")) {
    const auto& f = j["form"];
    std::string fp = child(path, "form");
    if (!f.is_array()) fail(fp, "expected a square matrix");
    for (std::size_t i = 0; i < f.size(); ++i) spec.form.push_back(read_vector(f[i], index_path(fp, i), f.size()));
  }
  if (j.contains("polynomials")) {
    const auto& ps = j["polynomials"];
    std::string pp = child(path, "polynomials");
    if (!ps.is_array()) fail(pp, "expected an array of polynomials");
    for (std::size_t p = 0; p < ps.size(); ++p) {
      std::string mp = index_path(pp, p);
      if (!ps[p].is_array()) fail(mp, "expected an array of monomials");
      Polynomial poly;
      for (std::size_t m = 0; m < ps[p].size(); ++m) {
        std::string tp = index_path(mp, m);
        const auto& mono = ps[p][m];
        if (!mono.is_object()) fail(tp, "expected {\"coeff\":..., \"powers\":[[slot,exp],...]}");
        Monomial out;
        out.coeff = read_rational(require(mono, "coeff", tp), child(tp, "coeff"));
        const auto& pw = require(mono, "powers", tp);
        if (!pw.is_array()) fail(child(tp, "powers"), "expected an array of [slot,exp] pairs");
        for (std::size_t k = 0; k < pw.size(); ++k) {
          auto e = read_ints(pw[k], index_path(child(tp, "powers"), k));
          if (e.size() != 2 || e[0] < 0 || static_cast<std::size_t>(e[0]) >= slots || e[1] < 1)
            fail(index_path(child(tp, "powers"), k), "expected [slot,exp] with a valid slot and exp >= 1");
          out.powers.emplace_back(e[0], e[1]);
        }
        poly.push_back(out);
      }
      spec.polynomials.push_back(poly);
    }
  }
  try {
    validate_oracle(spec);
  } catch (const ShapeMismatch& e) {
    fail(path, e.what());
  }
  return spec;
}

Caps read_caps(const Json& j, const std::string& path) {
  Caps caps;
  if (!j.is_object()) fail(path, "expected an object");
  if (j.contains("max_weights")) {
    long m = read_int(j["max_weights"], child(path, "max_weights"));
    if (m < 1 || m > 64) fail(child(path, "max_weights"), "must lie in 1..64");
    caps.max_weights = static_cast<std::size_t>(m);
  }
  if (j.contains("trials")) {
    long t = read_int(j["trials"], child(path, "trials"));
    if (t < 1) fail(child(path, "trials"), "must be positive");
    caps.trials = static_cast<int>(t);
  }
  if (j.contains("heights")) {
    caps.heights.clear();
    const auto& h = j["heights"];
    if (!h.is_array() || h.empty()) fail(child(path, "heights"), "expected a nonempty array");
    for (std::size_t i = 0; i < h.size(); ++i) {
      long v = read_int(h[i], index_path(child(path, "heights"), i));
      if (v < 1) fail(index_path(child(path, "heights"), i), "must be positive");
      caps.heights.push_back(v);
    }
  }
  return caps;
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ":" + std::to_string(col);
}

std::string word_string(const WeylElement& w) {
  if (w.word.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.word.size(); ++i) s += (i ? "." : "") + ("s" + std::to_string(w.word[i] + 1));
  return s;
}

Json index_list(Mask m) {
  Json a = Json::array();
  for (int i : mask_indices(m)) a.push_back(i);
  return a;
}

std::string tri_name(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
  }
}

}  // namespace

Json rational_json(const Q& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return to_string(q);
}

Json vector_json(const QVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rational_json(x));
  return a;
}

Json ray_json(const QVec& v) { return vector_json(primitive(v)); }

InstanceFile parse_instance(const std::string& text, const Caps* overrides) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(line_col(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  if (!j.is_object()) fail("<root>", "expected a JSON object");

  InstanceFile out;
  PvsInstance& inst = out.instance;
  bool has_psi = j.contains("psi_v"), has_dk = j.contains("dk");
  if (has_psi == has_dk) fail("<root>", "exactly one of psi_v and dk must be present");

  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long>() >= 0))
      fail("seed", "expected a nonnegative integer");
    inst.seed = s.get<std::uint64_t>();
  }
  if (j.contains("caps")) inst.caps = read_caps(j["caps"], "caps");
  if (overrides) inst.caps = *overrides;
  inst.name = j.value("name", std::string("unnamed"));

  if (has_dk) {
    const auto& dk = j["dk"];
    if (!dk.is_object()) fail("dk", "expected {\"type\":..., \"h\":[...]}");
    const auto& type = require(dk, "type", "dk");
    if (!type.is_string()) fail("dk.type", "expected a string");
    out.dk_type = type.get<std::string>();
    RootDatum ambient;
    try {
      ambient = build_root_datum(*out.dk_type);
    } catch (const UnsupportedType& e) {
      fail("dk.type", e.what());
    }
    out.dk_h = read_ints(require(dk, "h", "dk"), "dk.h");
    if (out.dk_h.size() != ambient.rank())
      fail("dk.h", "expected " + std::to_string(ambient.rank()) + " labels, got " + std::to_string(out.dk_h.size()));
    for (std::size_t i = 0; i < out.dk_h.size(); ++i)
      if (out.dk_h[i] < 0) fail(index_path("dk.h", i), "labels must be nonnegative");
    DkOptions opts;
    opts.seed = inst.seed;
    opts.caps = inst.caps;
    opts.attach_oracle = !j.contains("oracle");
    std::string name = inst.name;
    inst = build_dk_pvs(ambient, out.dk_h, opts);
    inst.name = name;
  } else {
    const auto& rd = require(j, "root_datum", "");
    if (!rd.is_string()) fail("root_datum", "expected a string such as \"GL3xGL2\"");
    try {
      inst.datum = build_root_datum(rd.get<std::string>());
    } catch (const UnsupportedType& e) {
      fail("root_datum", e.what());
    }
    std::size_t dim = inst.datum.ambient_dim;
    inst.g_simple = read_simple_set(require(j, "g_simple", ""), "g_simple", inst.datum.rank());
    const auto& psi = j["psi_v"];
    if (!psi.is_array()) fail("psi_v", "expected an array of {\"weight\":[...], \"mult\":n}");
    for (std::size_t i = 0; i < psi.size(); ++i) {
      std::string p = index_path("psi_v", i);
      if (psi[i].is_array()) {
        inst.psi_v.push_back(read_vector(psi[i], p, dim));
        inst.mult.push_back(1);
        continue;
      }
      if (!psi[i].is_object()) fail(p, "expected a weight vector or {\"weight\":[...], \"mult\":n}");
      inst.psi_v.push_back(read_vector(require(psi[i], "weight", p), child(p, "weight"), dim));
      long m = psi[i].contains("mult") ? read_int(psi[i]["mult"], child(p, "mult")) : 1;
      if (m < 1) fail(child(p, "mult"), "must be positive");
      inst.mult.push_back(static_cast<int>(m));
    }
    if (j.contains("xstar_g")) {
      inst.xstar_g = read_vectors(j["xstar_g"], "xstar_g", dim);
    } else {
      std::vector<QVec> coroots;
      for (int s : inst.g_simple.indices()) coroots.push_back(inst.datum.simple_coroots[s]);
      inst.xstar_g = kernel_basis(coroots, dim);
    }
  }

  std::size_t dim = inst.datum.ambient_dim;
  if (j.contains("fund_chars")) inst.fund_chars = read_vectors(j["fund_chars"], "fund_chars", dim);
  if (j.contains("oracle")) {
    std::size_t slots = 0;
    for (int m : inst.mult) slots += static_cast<std::size_t>(m);
    inst.oracle = read_oracle(j["oracle"], "oracle", slots);
    if (!j.contains("fund_chars")) {
      inst.fund_chars.clear();
      for (std::size_t i = 0; i < frip_count(*inst.oracle); ++i) {
        std::vector<QVec> slot_weights;
        for (std::size_t w = 0; w < inst.psi_v.size(); ++w)
          for (int c = 0; c < inst.mult[w]; ++c) slot_weights.push_back(inst.psi_v[w]);
        inst.fund_chars.push_back(frip_weight(*inst.oracle, slot_weights, i, inst.seed));
      }
    }
    if (!j.contains("seed")) fail("seed", "required when an oracle is present");
  }
  if (j.contains("components")) {
    const auto& c = j["components"];
    if (!c.is_array()) fail("components", "expected an array of weight index lists");
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto part = read_ints(c[i], index_path("components", i));
      for (std::size_t k = 0; k < part.size(); ++k)
        if (part[k] < 0 || static_cast<std::size_t>(part[k]) >= inst.psi_v.size())
          fail(index_path(index_path("components", i), k), "weight index out of range");
      inst.components.push_back(part);
    }
  }
  if (j.contains("ifd")) {
    const auto& list = j["ifd"];
    if (!list.is_array()) fail("ifd", "expected an array of {\"label\", \"q\", \"hL\"}");
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string p = index_path("ifd", i);
      if (!list[i].is_object()) fail(p, "expected an object");
      IfdSpec spec;
      spec.label = list[i].value("label", "ifd" + std::to_string(i));
      spec.q = read_simple_set(require(list[i], "q", p), child(p, "q"), inst.datum.rank());
      spec.hl = list[i].contains("hL") ? read_ints(list[i]["hL"], child(p, "hL"))
                                       : std::vector<int>(spec.q.size(), 0);
      if (spec.hl.size() != spec.q.size())
        fail(child(p, "hL"), "expected one label per simple root in q (" + std::to_string(spec.q.size()) + ")");
      out.ifds.push_back(spec);
    }
  }
  try {
    finalize(inst);
  } catch (const InvalidInstance& e) {
    std::string msg = e.what();
    auto colon = msg.find(':');
    throw ParseError(colon == std::string::npos ? "<instance>" : msg.substr(0, colon),
                     colon == std::string::npos ? msg : msg.substr(colon + 2));
  }
  return out;
}

InstanceFile load_instance(const std::string& path, const Caps* overrides) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str(), overrides);
}

Json instance_to_json(const PvsInstance& inst, const std::vector<IfdSpec>& ifds) {
  Json j;
  j["name"] = inst.name;
  j["root_datum"] = inst.datum.type_label;
  Json g = Json::array();
  for (int i : inst.g_simple.indices()) g.push_back(i + 1);
  j["g_simple"] = g;
  Json psi = Json::array();
  for (std::size_t w = 0; w < inst.psi_v.size(); ++w) psi.push_back({{"weight", vector_json(inst.psi_v[w])}, {"mult", inst.mult[w]}});
  j["psi_v"] = psi;
  Json xs = Json::array();
  for (const auto& x : inst.xstar_g) xs.push_back(vector_json(x));
  j["xstar_g"] = xs;
  Json fc = Json::array();
  for (const auto& x : inst.fund_chars) fc.push_back(vector_json(x));
  j["fund_chars"] = fc;
  if (inst.oracle) {
    const auto& o = *inst.oracle;
    Json oj;
    oj["kind"] = to_string(o.kind);
    if (!o.shape.empty()) oj["shape"] = o.shape;
    if (!o.layout.empty()) {
      Json lay = Json::array();
      for (const auto& s : o.layout) lay.push_back({s.matrix, s.row, s.col});
      oj["layout"] = lay;
    }
    if (!o.form.empty()) {
      Json f = Json::array();
      for (const auto& row : o.form) f.push_back(vector_json(row));
      oj["form"] = f;
    }
    if (!o.polynomials.empty()) {
      Json ps = Json::array();
      for (const auto& p : o.polynomials) {
        Json pj = Json::array();
        for (const auto& m : p) {
          Json pw = Json::array();
          for (const auto& [slot, e] : m.powers) pw.push_back({slot, e});
          pj.push_back({{"coeff", rational_json(m.coeff)}, {"powers", pw}});
        }
        ps.push_back(pj);
      }
      oj["polynomials"] = ps;
    }
    j["oracle"] = oj;
  }
  if (!inst.components.empty()) j["components"] = inst.components;
  j["seed"] = inst.seed;
  j["caps"] = {{"max_weights", inst.caps.max_weights}, {"trials", inst.caps.trials}, {"heights", inst.caps.heights}};
  if (!ifds.empty()) {
    Json list = Json::array();
    for (const auto& s : ifds) {
      Json q = Json::array();
      for (int i : s.q.indices()) q.push_back(i + 1);
      list.push_back({{"label", s.label}, {"q", q}, {"hL", s.hl}});
    }
    j["ifd"] = list;
  }
  return j;
}

namespace {

Json weights_json(const PvsInstance& inst) {
  Json a = Json::array();
  for (std::size_t w = 0; w < inst.psi_v.size(); ++w)
    a.push_back({{"index", w}, {"weight", vector_json(inst.psi_v[w])}, {"mult", inst.mult[w]}});
  return a;
}

Json matching_json(const PvsInstance& inst, const MatchingWitness& m) {
  Json a = Json::array();
  for (const auto& p : m.pairs) {
    Json e = {{"weight", p.weight}, {"copy", p.copy}};
    e["root"] = p.root_slot >= 0 ? vector_json(inst.g_roots[static_cast<std::size_t>(p.root_slot)]) : Json(nullptr);
    a.push_back(e);
  }
  return a;
}

std::string space_id(std::size_t i) { return "S" + std::to_string(i); }

Json cf_json(const CfDecomposition& cf) {
  Json j;
  Json comps = Json::array();
  for (Mask c : cf.components) comps.push_back(index_list(c));
  j["components"] = comps;
  j["declared"] = cf.declared;
  j["disjoint"] = cf.disjoint;
  Json om = Json::array();
  for (const auto& w : cf.omegas) om.push_back(vector_json(w));
  j["omegas"] = om;
  j["independent"] = cf.independent;
  j["simple_case"] = cf.simple_case ? Json(*cf.simple_case) : Json(nullptr);
  return j;
}

Json standardize_json(const PvsInstance& inst, const IfdSpec& spec, const std::vector<Mask>* spaces, int jobs) {
  std::size_t rank = inst.datum.rank();
  Json e;
  e["label"] = spec.label;
  e["q"] = spec.q.pattern(rank);
  e["hL"] = spec.hl;
  try {
    auto labels = ifd_to_grading(inst.datum, spec);
    e["grading"] = labels;
    StandardizeOptions so;
    so.jobs = jobs;
    auto r = standardize_ifiltration(inst.datum, inst, labels, so);
    e["status"] = r.status == StandardizeStatus::Found ? "found" : "not_found";
    e["candidates"] = r.candidates;
    e["passing"] = r.passing;
    e["identity"] = {{"weights", index_list(r.identity_u)}, {"minset", to_string(r.identity_minset)}};
    if (r.status == StandardizeStatus::Found) {
      e["w"] = word_string(r.w);
      e["weights"] = index_list(r.u);
      e["dim"] = mask_size(r.u);
      e["stab"] = r.predicted_stab.pattern(rank);
      e["stab_matches"] = r.stab_matches;
      e["special"] = r.special ? tri_name(r.special->special) : "unknown";
      Json id = nullptr;
      if (spaces)
        for (std::size_t i = 0; i < spaces->size(); ++i)
          if ((*spaces)[i] == r.u) id = space_id(i);
      e["spcl_id"] = id;
    }
  } catch (const InconsistentIfd& ex) {
    e["status"] = "inconsistent";
    e["error"] = ex.what();
  }
  return e;
}

}  // namespace

Json analyze_report(const InstanceFile& file, const AnalyzeOptions& opts) {
  const PvsInstance& inst = file.instance;
  std::size_t rank = inst.datum.rank();
  Json rep;
  rep["tool"] = "pvsa";
  rep["version"] = kToolVersion;
  rep["seed"] = inst.seed;
  rep["instance"] = instance_to_json(inst, file.ifds);
  rep["weights"] = weights_json(inst);

  EnumerateOptions eo;
  eo.jobs = opts.jobs;
  auto specials = enumerate_spcl(inst, eo);
  std::vector<Mask> spaces;
  for (const auto& s : specials) spaces.push_back(s.members);
  std::map<Mask, std::size_t> where;
  for (std::size_t i = 0; i < spaces.size(); ++i) where[spaces[i]] = i;

  std::vector<Mask> confirmed;
  for (const auto& s : specials)
    if (s.special == Tri::Yes) confirmed.push_back(s.members);
  rep["cf_decomposition"] = cf_json(cf_decompose(inst, &confirmed));

  Json list = Json::array();
  Json exc_yes = Json::array(), exc_no = Json::array(), exc_unknown = Json::array();
  for (std::size_t i = 0; i < specials.size(); ++i) {
    const auto& s = specials[i];
    Json e;
    e["id"] = space_id(i);
    e["weights"] = index_list(s.members);
    int dim = 0;
    for (int w : mask_indices(s.members)) dim += inst.mult[static_cast<std::size_t>(w)];
    e["dim"] = dim;
    e["stab"] = s.stab.pattern(rank);
    e["env"] = s.env ? Json(s.env->pattern(rank)) : Json(nullptr);
    e["env_equals_stab"] = s.env && *s.env == s.stab;
    if (s.env) {
      Mask star = star_closure(inst, s.members, parabolic_slots(inst, *s.env));
      auto it = where.find(star);
      e["env_star"] = it != where.end() ? Json(space_id(it->second)) : Json(index_list(star));
    } else {
      e["env_star"] = nullptr;
    }
    e["minset"] = to_string(s.minset);
    e["special"] = tri_name(s.special);
    e["lambda"] = vector_json(lambda_of(inst, s.members));
    e["matching"] = s.matching ? matching_json(inst, *s.matching) : Json(nullptr);
    try {
      auto ex = is_exceptional(inst, s.members, s.stab);
      Json xj = {{"status", tri_name(ex.status)}};
      if (ex.status == Tri::Yes) {
        xj["witness"] = index_list(ex.witness);
        xj["kernel"] = ray_json(ex.kernel_vector);
      }
      e["exceptional"] = xj;
      (ex.status == Tri::Yes ? exc_yes : ex.status == Tri::No ? exc_no : exc_unknown).push_back(space_id(i));
    } catch (const std::exception& ex) {
      e["exceptional"] = {{"status", "error"}, {"error", ex.what()}};
      exc_unknown.push_back(space_id(i));
    }
    list.push_back(e);
  }
  rep["spcl"] = list;

  Json hasse = Json::array();
  for (auto [c, p] : hasse_edges(spaces)) hasse.push_back({space_id(static_cast<std::size_t>(c)), space_id(static_cast<std::size_t>(p))});
  rep["hasse"] = hasse;
  rep["exceptional"] = {{"exceptional", exc_yes}, {"not_exceptional", exc_no}, {"undecided", exc_unknown}};

  Json conv = Json::array();
  if (inst.fund_chars.empty()) {
    rep["convergence"] = {{"skipped", "no fundamental characters"}};
  } else {
    std::vector<std::vector<Q>> mus = {std::vector<Q>(inst.fund_chars.size(), Q(1))};
    for (const auto& m : opts.extra_mu) mus.push_back(m);
    for (const auto& mu : mus) {
      Json mj = Json::array();
      for (const auto& q : mu) mj.push_back(rational_json(q));
      for (std::size_t i = 0; i < specials.size(); ++i) {
        Json e = {{"space", space_id(i)}, {"mu", mj}};
        try {
          auto cert = convergence_certificate(inst, specials[i].members, mu);
          e["positive"] = cert.positive;
          e["witness"] = cert.positivity.witness ? ray_json(*cert.positivity.witness) : Json(nullptr);
        } catch (const InvalidMu&) {
          throw;
        } catch (const std::exception& ex) {
          e["error"] = ex.what();
        }
        conv.push_back(e);
      }
    }
    rep["convergence"] = conv;
  }

  if (!file.ifds.empty()) {
    Json ifd = Json::array();
    for (const auto& spec : file.ifds) ifd.push_back(standardize_json(inst, spec, &spaces, opts.jobs));
    rep["ifd"] = ifd;
  }
  return rep;
}

Json ifd_report(const InstanceFile& file, int jobs) {
  const PvsInstance& inst = file.instance;
  Json rep;
  rep["tool"] = "pvsa";
  rep["version"] = kToolVersion;
  rep["seed"] = inst.seed;
  rep["instance"] = inst.name;
  std::vector<Mask> spaces;
  bool have_spaces = false;
  try {
    EnumerateOptions eo;
    eo.jobs = jobs;
    for (const auto& s : enumerate_spcl(inst, eo)) spaces.push_back(s.members);
    have_spaces = true;
  } catch (const CapExceeded&) {
  }
  rep["weights"] = weights_json(inst);
  Json ifd = Json::array();
  for (const auto& spec : file.ifds) ifd.push_back(standardize_json(inst, spec, have_spaces ? &spaces : nullptr, jobs));
  rep["ifd"] = ifd;
  return rep;
}

Json dk_report(const PvsInstance& inst, const std::vector<int>& h, const std::optional<std::string>& oracle_note) {
  Json rep = instance_to_json(inst);
  Json warnings = Json::array();
  if (inst.psi_v.empty()) warnings.push_back("empty V: no positive root has grade 2");
  if (!inst.psi_v.empty() && !oracle_note) warnings.push_back("no built-in relative invariant for this grading");
  Json meta = {{"tool", "pvsa"}, {"version", kToolVersion}, {"h", h}};
  meta["oracle"] = oracle_note ? Json(*oracle_note) : Json(nullptr);
  meta["warnings"] = warnings;
  rep["generated_by"] = meta;
  return rep;
}

namespace {

bool is_scalar_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& x : j)
    if (x.is_structured()) return false;
  return true;
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  if (is_scalar_array(j)) {
    std::string s = "(";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? "," : "") + scalar_text(j[i]);
    return s + ")";
  }
  return j.dump();
}

bool is_flat_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& x : j)
    if (x.is_object() || (x.is_array() && !is_scalar_array(x))) return false;
  return true;
}

void render(const Json& j, int indent, std::ostringstream& out) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !is_scalar_array(v) && !(v.is_array() && v.empty())) {
        if (is_flat_array(v)) {
          out << pad << k << ":";
          for (const auto& x : v) out << " " << scalar_text(x);
          out << "\n";
        } else {
          out << pad << k << ":\n";
          render(v, indent + 2, out);
        }
      } else {
        out << pad << k << ": " << scalar_text(v) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_object()) {
        out << pad << "-\n";
        render(v, indent + 2, out);
      } else {
        out << pad << "- " << scalar_text(v) << "\n";
      }
    }
  } else {
    out << pad << scalar_text(j) << "\n";
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream out;
  render(report, 0, out);
  return out.str();
}

}  // namespace pvsa
