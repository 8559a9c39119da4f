#include "qg3/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace qg3 {

namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw validation_error("schema violation at " + pointer + ": " + what);
}

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
}

const Json& require_field(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(where + "/" + key, "missing field");
  return *it;
}

int require_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where, "expected an integer");
  return j.get<int>();
}

double require_number(const Json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

}  // namespace

Json label_to_json(const BasisLabel& l) {
  Json j;
  j["n"] = l.n;
  Json sites = Json::array();
  Json gm = Json::array();
  for (const auto& [site, k] : l.factors) {
    sites.push_back(site);
    gm.push_back(k);
  }
  j["sites"] = std::move(sites);
  j["gm"] = std::move(gm);
  return j;
}

namespace {

BasisLabel factors_from_json(int n, const Json& j, const std::string& where) {
  const Json& sites = require_field(j, "sites", where);
  const Json& gm = require_field(j, "gm", where);
  if (!sites.is_array()) schema_error(where + "/sites", "expected an array");
  if (!gm.is_array()) schema_error(where + "/gm", "expected an array");
  if (sites.size() != gm.size())
    schema_error(where + "/gm", "sites and gm must have equal length");
  BasisLabel l;
  l.n = n;
  for (size_t i = 0; i < sites.size(); ++i)
    l.factors.emplace_back(require_int(sites[i], where + "/sites/" + std::to_string(i)),
                           require_int(gm[i], where + "/gm/" + std::to_string(i)));
  try {
    l.validate();
  } catch (const std::invalid_argument& e) {
    schema_error(where, e.what());
  }
  return l;
}

}  // namespace

BasisLabel label_from_json(const Json& j, const std::string& where) {
  require_object(j, where);
  const int n = require_int(require_field(j, "n", where), where + "/n");
  return factors_from_json(n, j, where);
}

Json coeffs_to_json(const CoefficientVector& c) {
  Json j;
  j["n"] = c.n;
  Json terms = Json::array();
  for (const auto& [l, v] : c.terms) {
    Json t;
    Json sites = Json::array();
    Json gm = Json::array();
    for (const auto& [site, k] : l.factors) {
      sites.push_back(site);
      gm.push_back(k);
    }
    t["sites"] = std::move(sites);
    t["gm"] = std::move(gm);
    t["h"] = v;
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

CoefficientVector coeffs_from_json(const Json& j, const std::string& where) {
  require_object(j, where);
  const int n = require_int(require_field(j, "n", where), where + "/n");
  CoefficientVector c(n);
  const Json& terms = require_field(j, "terms", where);
  if (!terms.is_array()) schema_error(where + "/terms", "expected an array");
  for (size_t i = 0; i < terms.size(); ++i) {
    const std::string tw = where + "/terms/" + std::to_string(i);
    require_object(terms[i], tw);
    BasisLabel l = factors_from_json(n, terms[i], tw);
    const double h = require_number(require_field(terms[i], "h", tw), tw + "/h");
    c.add(l, h);
  }
  return c;
}

Json matrix_to_json(const Matrix& m) {
  Json j;
  j["dim"] = static_cast<int>(m.rows());
  Json re = Json::array();
  Json im = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json rr = Json::array();
    Json ri = Json::array();
    for (int c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  require_object(j, where);
  const int dim = require_int(require_field(j, "dim", where), where + "/dim");
  if (dim < 1) schema_error(where + "/dim", "expected a positive dimension");
  const Json& re = require_field(j, "re", where);
  const Json& im = require_field(j, "im", where);
  if (!re.is_array() || static_cast<int>(re.size()) != dim)
    schema_error(where + "/re", "expected " + std::to_string(dim) + " rows");
  if (!im.is_array() || static_cast<int>(im.size()) != dim)
    schema_error(where + "/im", "expected " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const Json& rr = re[r];
    const Json& ri = im[r];
    if (!rr.is_array() || static_cast<int>(rr.size()) != dim)
      schema_error(where + "/re/" + std::to_string(r), "expected " + std::to_string(dim) + " entries");
    if (!ri.is_array() || static_cast<int>(ri.size()) != dim)
      schema_error(where + "/im/" + std::to_string(r), "expected " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c)
      m(r, c) = Complex(require_number(rr[c], where + "/re"), require_number(ri[c], where + "/im"));
  }
  return m;
}

Json schedule_to_json(const Schedule& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = s.n;
  Json segments = Json::array();
  for (const auto& seg : s.segments) {
    Json js;
    js["dt"] = seg.dt;
    js["terms"] = coeffs_to_json(seg.h)["terms"];
    segments.push_back(std::move(js));
  }
  j["segments"] = std::move(segments);
  return j;
}

Schedule schedule_from_json(const Json& j) {
  require_object(j, "");
  Schedule s;
  s.n = require_int(require_field(j, "n", ""), "/n");
  if (s.n < 1) schema_error("/n", "expected n >= 1");
  const Json& segments = require_field(j, "segments", "");
  if (!segments.is_array()) schema_error("/segments", "expected an array");
  for (size_t i = 0; i < segments.size(); ++i) {
    const std::string where = "/segments/" + std::to_string(i);
    require_object(segments[i], where);
    Segment seg;
    seg.dt = require_number(require_field(segments[i], "dt", where), where + "/dt");
    if (!(seg.dt > 0.0)) schema_error(where + "/dt", "expected a positive duration");
    seg.h = CoefficientVector(s.n);
    const Json& terms = require_field(segments[i], "terms", where);
    if (!terms.is_array()) schema_error(where + "/terms", "expected an array");
    for (size_t t = 0; t < terms.size(); ++t) {
      const std::string tw = where + "/terms/" + std::to_string(t);
      require_object(terms[t], tw);
      BasisLabel l = factors_from_json(s.n, terms[t], tw);
      seg.h.add(l, require_number(require_field(terms[t], "h", tw), tw + "/h"));
    }
    s.segments.push_back(std::move(seg));
  }
  return s;
}

Schedule load_schedule(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error("schedule file " + path + ": " + e.what());
  }
  return schedule_from_json(j);
}

namespace {

int count_lambda8(const BasisLabel& l) {
  int c = 0;
  for (const auto& [site, gm] : l.factors)
    if (gm == 8) ++c;
  return c;
}

}  // namespace

Json gates_to_json(const GateSequence& g, GateConvention conv) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = g.n;
  j["generator_normalization"] =
      conv == GateConvention::kTraceNormalized ? "trace" : "operator-norm";
  Json gates = Json::array();
  const double two_over_sqrt3 = 2.0 / std::sqrt(3.0);
  for (const auto& gate : g.gates) {
    Json jg;
    Json sites = Json::array();
    Json gm = Json::array();
    for (const auto& [site, k] : gate.label.factors) {
      sites.push_back(site);
      gm.push_back(k);
    }
    jg["sites"] = std::move(sites);
    jg["gm"] = std::move(gm);
    double angle = gate.angle;
    if (conv == GateConvention::kOperatorNorm) {
      // exp(-i a Λ) = exp(-i (a r) Λ_unit) with Λ = r Λ_unit
      double r = Basis::scale(gate.label.body());
      r *= std::pow(two_over_sqrt3, count_lambda8(gate.label));
      angle *= r;
    }
    jg["angle"] = angle;
    gates.push_back(std::move(jg));
  }
  j["gates"] = std::move(gates);
  return j;
}

GateSequence gates_from_json(const Json& j) {
  require_object(j, "");
  GateSequence g;
  g.n = require_int(require_field(j, "n", ""), "/n");
  const Json& gates = require_field(j, "gates", "");
  if (!gates.is_array()) schema_error("/gates", "expected an array");
  for (size_t i = 0; i < gates.size(); ++i) {
    const std::string where = "/gates/" + std::to_string(i);
    require_object(gates[i], where);
    Gate gate;
    gate.label = factors_from_json(g.n, gates[i], where);
    gate.angle = require_number(require_field(gates[i], "angle", where), where + "/angle");
    g.gates.push_back(std::move(gate));
  }
  return g;
}

Json report_to_json(const SynthesisReport& r, const Json& config) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config;
  j["input_digest"] = r.input_digest;
  Json budget;
  budget["projection"] = {{"value", r.budget.projection}, {"origin", "lemma3"}};
  budget["mean_total"] = {{"value", r.budget.mean_total}, {"origin", "lemma4"}};
  budget["trotter_total"] = {{"value", r.budget.trotter_total}, {"origin", "lemma5+prop1"}};
  budget["a_priori_total"] = {{"value", r.budget.a_priori_total}, {"origin", "theorem1"}};
  budget["measured_error"] = r.budget.measured_error;
  budget["parameters"] = {{"n", r.budget.n},
                          {"p", r.budget.p},
                          {"delta", r.budget.delta},
                          {"slices", r.budget.slices},
                          {"norm_cap", r.budget.norm_cap},
                          {"path_length", r.budget.path_length}};
  j["budget"] = std::move(budget);
  j["gate_count"] = r.budget.gate_count;
  Json slices = Json::array();
  for (const auto& s : r.slices) {
    Json js;
    js["index"] = s.index;
    js["width"] = s.width;
    js["norm_cap"] = s.norm_cap;
    js["mean_bound"] = s.mean_bound;
    js["trotter_defect"] = s.trotter_defect;
    js["gates"] = s.gate_count;
    slices.push_back(std::move(js));
  }
  j["slices"] = std::move(slices);
  j["gates"] = gates_to_json(r.gates)["gates"];
  return j;
}

Json campaign_to_json(const CampaignReport& r, const Json& config) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config;
  j["name"] = r.name;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["passed"] = r.passed;
  j["all_pass"] = r.all_pass();
  j["worst_margin"] = r.worst_margin;
  Json params;
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = std::move(params);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json jr;
    jr["index"] = row.index;
    jr["pass"] = row.pass;
    jr["margin"] = row.margin;
    jr["lhs"] = row.lhs;
    jr["rhs"] = row.rhs;
    jr["note"] = row.note;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string slices_to_csv(const SynthesisReport& r, const Json& config) {
  std::ostringstream os;
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "# config=" << config.dump() << "\n";
  os << "slice,c,width,mean_bound,trotter_defect,gates\n";
  for (const auto& s : r.slices) {
    os << s.index << "," << format_double(s.norm_cap) << "," << format_double(s.width) << ","
       << format_double(s.mean_bound) << "," << format_double(s.trotter_defect) << ","
       << s.gate_count << "\n";
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot open for writing: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace qg3
