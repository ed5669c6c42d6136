#include "cocycle_cli/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cocycle/error.hpp"
#include "cocycle_cli/ops.hpp"

namespace cocycle::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::InvalidConfig, what); }

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    bad("field '" + key + "' has the wrong type");
  }
}

Complex complex_of(const YAML::Node& n, const std::string& key) {
  if (n.IsScalar()) return {scalar<double>(n, key), 0.0};
  if (n.IsSequence() && n.size() == 2)
    return {scalar<double>(n[0], key), scalar<double>(n[1], key)};
  bad("field '" + key + "' must be a number or an [re, im] pair");
}

std::vector<double> reals_of(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) bad("field '" + key + "' must be a list");
  std::vector<double> v;
  for (const auto& e : n) v.push_back(scalar<double>(e, key));
  return v;
}

std::vector<Complex> complexes_of(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) bad("field '" + key + "' must be a list");
  std::vector<Complex> v;
  for (const auto& e : n) v.push_back(complex_of(e, key));
  return v;
}

Matrix matrix_of(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence() || n.size() == 0) bad("field '" + key + "' must be a list of rows");
  const auto rows = static_cast<Eigen::Index>(n.size());
  const auto cols = static_cast<Eigen::Index>(n[0].IsSequence() ? n[0].size() : 0);
  if (cols == 0) bad("field '" + key + "' has an empty row");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const YAML::Node row = n[static_cast<std::size_t>(i)];
    if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != cols)
      bad("field '" + key + "' has ragged rows");
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_of(row[static_cast<std::size_t>(j)], key);
  }
  return m;
}

Word word_of(const YAML::Node& n, const std::string& key) {
  if (n.IsScalar()) {
    // "12" reads as a word of single-digit symbols
    Word w;
    for (char c : n.as<std::string>()) {
      if (c < '0' || c > '9') bad("field '" + key + "' must list symbols");
      w.push_back(c - '0');
    }
    return w;
  }
  if (!n.IsSequence()) bad("field '" + key + "' must list symbols");
  Word w;
  for (const auto& e : n) w.push_back(scalar<int>(e, key));
  return w;
}

void emit_complex(YAML::Emitter& out, Complex z) {
  out << YAML::Flow << YAML::BeginSeq << z.real() << z.imag() << YAML::EndSeq;
}

void emit_matrix(YAML::Emitter& out, const Matrix& m) {
  out << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << YAML::Flow << YAML::BeginSeq;
    for (Eigen::Index j = 0; j < m.cols(); ++j) emit_complex(out, m(i, j));
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq;
}

template <class T>
void emit_list(YAML::Emitter& out, const std::vector<T>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const auto& x : v) out << x;
  out << YAML::EndSeq;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    bad(std::string("config does not parse: ") + e.what());
  }
  if (!root.IsMap()) bad("config must be a mapping");

  Scenario s;
  if (root["name"]) s.name = scalar<std::string>(root["name"], "name");
  if (!root["alphabet"]) bad("missing field 'alphabet'");
  s.alphabet = scalar<int>(root["alphabet"], "alphabet");

  if (const auto m = root["measure"]) {
    if (m["weights"]) s.weights = reals_of(m["weights"], "measure.weights");
    if (m["fiber_density"]) s.fiber_density = reals_of(m["fiber_density"], "measure.fiber_density");
    if (m["kappa"]) s.kappa = scalar<double>(m["kappa"], "measure.kappa");
  }
  if (s.weights.empty() && s.alphabet > 0)
    s.weights.assign(static_cast<std::size_t>(s.alphabet), 1.0 / s.alphabet);

  const auto f = root["fiber"];
  if (!f) bad("missing section 'fiber'");
  if (f["kind"]) s.fiber.kind = scalar<std::string>(f["kind"], "fiber.kind");
  if (f["window"]) s.fiber.window = scalar<int>(f["window"], "fiber.window");
  if (!f["angles"]) bad("missing field 'fiber.angles'");
  s.fiber.angles = reals_of(f["angles"], "fiber.angles");
  if (f["amplitude"]) s.fiber.amplitude = scalar<double>(f["amplitude"], "fiber.amplitude");

  const auto c = root["cocycle"];
  if (!c) bad("missing section 'cocycle'");
  if (c["kind"]) s.cocycle.kind = scalar<std::string>(c["kind"], "cocycle.kind");
  if (c["tau"]) s.cocycle.tau = complexes_of(c["tau"], "cocycle.tau");
  if (c["matrix"]) s.cocycle.matrix = matrix_of(c["matrix"], "cocycle.matrix");
  if (c["R"]) s.cocycle.r = matrix_of(c["R"], "cocycle.R");
  if (c["R_sin"]) s.cocycle.r_sin = matrix_of(c["R_sin"], "cocycle.R_sin");
  if (c["radius"]) s.cocycle.radius = scalar<double>(c["radius"], "cocycle.radius");
  if (c["exponent"]) s.cocycle.exponent = scalar<double>(c["exponent"], "cocycle.exponent");
  if (c["tol_margin"]) s.cocycle.tol_margin = scalar<double>(c["tol_margin"], "cocycle.tol_margin");
  if (c["relation_bound"])
    s.cocycle.relation_bound = scalar<int>(c["relation_bound"], "cocycle.relation_bound");

  if (root["fixed_point"]) s.fixed_point = scalar<int>(root["fixed_point"], "fixed_point");
  if (root["homoclinic_core"]) s.homoclinic_core = word_of(root["homoclinic_core"], "homoclinic_core");

  if (const auto blocks = root["blocks"]) {
    if (!blocks.IsSequence()) bad("'blocks' must be a list");
    for (const auto& b : blocks) {
      Block blk;
      if (!b["name"] || !b["op"]) bad("every block needs a name and an op");
      blk.name = scalar<std::string>(b["name"], "blocks.name");
      blk.op = scalar<std::string>(b["op"], "blocks.op");
      if (b["seed"]) blk.seed = scalar<std::uint64_t>(b["seed"], "blocks.seed");
      blk.params = b["params"] ? YAML::Clone(b["params"]) : YAML::Node(YAML::NodeType::Map);
      if (!blk.params.IsMap()) bad("params of block '" + blk.name + "' must be a mapping");
      s.blocks.push_back(std::move(blk));
    }
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void validate_scenario(const Scenario& s) {
  if (s.alphabet < 2) bad("alphabet must have at least 2 symbols");
  if (static_cast<int>(s.weights.size()) != s.alphabet)
    bad("measure.weights must have one entry per symbol");
  auto in_alphabet = [&](Symbol x) { return x >= 0 && x < s.alphabet; };
  if (!in_alphabet(s.fixed_point)) bad("fixed_point outside the alphabet");
  if (s.homoclinic_core.empty()) bad("homoclinic_core must be nonempty");
  for (Symbol x : s.homoclinic_core)
    if (!in_alphabet(x)) bad("homoclinic_core uses a symbol outside the alphabet");
  if (s.kappa <= 0.0) bad("measure.kappa must be positive");

  if (s.fiber.kind != "rotation" && s.fiber.kind != "perturbed_rotation")
    bad("fiber.kind must be rotation or perturbed_rotation");

  const auto& c = s.cocycle;
  int d = 0;
  if (c.kind == "constant") {
    if (c.matrix.size() == 0 || c.matrix.rows() != c.matrix.cols())
      bad("constant cocycle needs a square matrix");
    d = static_cast<int>(c.matrix.rows());
  } else if (c.kind == "diagonal") {
    if (c.tau.empty()) bad("diagonal cocycle needs tau");
    d = static_cast<int>(c.tau.size());
  } else if (c.kind == "bump" || c.kind == "theoremC") {
    if (c.kind == "bump" && c.matrix.size() > 0) {
      if (c.matrix.rows() != c.matrix.cols()) bad("cocycle.matrix must be square");
      d = static_cast<int>(c.matrix.rows());
    } else {
      if (c.tau.empty()) bad("cocycle." + c.kind + " needs tau");
      d = static_cast<int>(c.tau.size());
    }
    if (c.r.rows() != d || c.r.cols() != d) bad("cocycle.R must be d x d");
    if (c.r_sin.size() > 0 && (c.r_sin.rows() != d || c.r_sin.cols() != d))
      bad("cocycle.R_sin must be d x d");
    if (c.radius <= 0.0) bad("cocycle.radius must be positive");
  } else {
    bad("unknown cocycle.kind '" + c.kind + "'");
  }
  if (d < 1) bad("cocycle dimension must be positive");

  std::set<std::string> names;
  for (const auto& b : s.blocks) {
    if (b.name.empty()) bad("block names must be nonempty");
    if (b.name.find_first_of("/\\") != std::string::npos || b.name == "error")
      bad("block name '" + b.name + "' is not a valid file stem");
    if (!names.insert(b.name).second) bad("duplicate block name '" + b.name + "'");
    if (!find_op(b.op)) fail(ErrorKind::UnknownOp, "unknown op '" + b.op + "' in block '" + b.name + "'");
    check_params(b.op, b.params, d);
  }
}

std::string serialize_scenario(const Scenario& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  if (!s.name.empty()) out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "alphabet" << YAML::Value << s.alphabet;

  out << YAML::Key << "measure" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "weights" << YAML::Value;
  emit_list(out, s.weights);
  if (!s.fiber_density.empty()) {
    out << YAML::Key << "fiber_density" << YAML::Value;
    emit_list(out, s.fiber_density);
  }
  out << YAML::Key << "kappa" << YAML::Value << s.kappa;
  out << YAML::EndMap;

  out << YAML::Key << "fiber" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << s.fiber.kind;
  out << YAML::Key << "window" << YAML::Value << s.fiber.window;
  out << YAML::Key << "angles" << YAML::Value;
  emit_list(out, s.fiber.angles);
  out << YAML::Key << "amplitude" << YAML::Value << s.fiber.amplitude;
  out << YAML::EndMap;

  const auto& c = s.cocycle;
  out << YAML::Key << "cocycle" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << c.kind;
  if (!c.tau.empty()) {
    out << YAML::Key << "tau" << YAML::Value << YAML::BeginSeq;
    for (Complex z : c.tau) emit_complex(out, z);
    out << YAML::EndSeq;
  }
  if (c.matrix.size() > 0) {
    out << YAML::Key << "matrix" << YAML::Value;
    emit_matrix(out, c.matrix);
  }
  if (c.r.size() > 0) {
    out << YAML::Key << "R" << YAML::Value;
    emit_matrix(out, c.r);
  }
  if (c.r_sin.size() > 0) {
    out << YAML::Key << "R_sin" << YAML::Value;
    emit_matrix(out, c.r_sin);
  }
  out << YAML::Key << "radius" << YAML::Value << c.radius;
  out << YAML::Key << "exponent" << YAML::Value << c.exponent;
  out << YAML::Key << "tol_margin" << YAML::Value << c.tol_margin;
  out << YAML::Key << "relation_bound" << YAML::Value << c.relation_bound;
  out << YAML::EndMap;

  out << YAML::Key << "fixed_point" << YAML::Value << s.fixed_point;
  out << YAML::Key << "homoclinic_core" << YAML::Value;
  emit_list(out, s.homoclinic_core);

  out << YAML::Key << "blocks" << YAML::Value << YAML::BeginSeq;
  for (const auto& b : s.blocks) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << b.name;
    out << YAML::Key << "op" << YAML::Value << b.op;
    out << YAML::Key << "seed" << YAML::Value << b.seed;
    if (b.params.size() > 0) out << YAML::Key << "params" << YAML::Value << b.params;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace cocycle::cli
