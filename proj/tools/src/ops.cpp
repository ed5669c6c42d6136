#include "cocycle_cli/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cocycle/error.hpp"
#include "cocycle/random.hpp"
#include "cocycle/spectrum.hpp"
#include "cocycle/ustates.hpp"

namespace cocycle::cli {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// context

namespace {

FiberMapFamily make_family(const Scenario& s) {
  if (s.fiber.kind == "rotation")
    return FiberMapFamily::rotation(s.alphabet, s.fiber.window, s.fiber.angles);
  return FiberMapFamily::perturbed_rotation(s.alphabet, s.fiber.window, s.fiber.angles,
                                            s.fiber.amplitude);
}

MeasureSpec make_measure(const Scenario& s) {
  MeasureSpec spec = MeasureSpec::bernoulli(s.weights);
  if (!s.fiber_density.empty()) spec.fiber_measure = DensityGrid{s.fiber_density};
  spec.kappa_bound = s.kappa;
  spec.validate();
  return spec;
}

Matrix diag_matrix(const std::vector<Complex>& tau) {
  const auto d = static_cast<Eigen::Index>(tau.size());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = tau[static_cast<std::size_t>(i)];
  return m;
}

}  // namespace

Context build_context(const Scenario& s, int threads) {
  validate_scenario(s);
  FiberMapFamily family = make_family(s);
  MeasureSpec spec = make_measure(s);
  const auto& c = s.cocycle;

  std::optional<CocycleGenerator> gen;
  std::optional<TheoremCCertificate> cert;
  BiSequence p = make_fixed_point(s.fixed_point);
  Homoclinic z = make_homoclinic(s.homoclinic_core, s.fixed_point);
  if (c.kind == "constant") {
    gen = CocycleGenerator::constant(c.matrix);
  } else if (c.kind == "diagonal") {
    gen = CocycleGenerator::diagonal_constant(c.tau);
  } else if (c.kind == "bump") {
    BumpSpec b;
    b.base = c.matrix.size() > 0 ? c.matrix : diag_matrix(c.tau);
    b.r = c.r;
    b.r_sin = c.r_sin;
    b.center = z.point;
    b.radius = c.radius;
    b.exponent = c.exponent;
    gen = CocycleGenerator::bump_perturbed(b);
  } else {
    TheoremCExample ex = theoremC_example(c.tau, c.r, c.radius, s.homoclinic_core, s.fixed_point,
                                          c.tol_margin, c.relation_bound);
    gen = ex.gen;
    cert = ex.certificate;
    p = ex.p;
    z = ex.z;
  }
  SkewProduct dyn(family);
  return Context{s, std::move(family), std::move(dyn), std::move(spec), *gen, p, z, cert, threads};
}

// ---------------------------------------------------------------------------
// parameters

YAML::Node Params::lookup(const std::string& key) const {
  if (given_ && given_[key]) return given_[key];
  for (const auto& d : docs_)
    if (d.name == key) return YAML::Load(d.default_value);
  fail(ErrorKind::PreconditionViolation, "undocumented parameter '" + key + "'");
}

namespace {

template <class T>
T convert(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(ErrorKind::InvalidConfig, "parameter '" + key + "' has the wrong type");
  }
}

template <class T>
std::vector<T> convert_list(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) fail(ErrorKind::InvalidConfig, "parameter '" + key + "' must be a list");
  std::vector<T> out;
  for (const auto& e : n) out.push_back(convert<T>(e, key));
  return out;
}

}  // namespace

double Params::real(const std::string& key) const { return convert<double>(lookup(key), key); }
std::int64_t Params::integer(const std::string& key) const {
  return convert<std::int64_t>(lookup(key), key);
}
bool Params::flag(const std::string& key) const { return convert<bool>(lookup(key), key); }
std::vector<double> Params::reals(const std::string& key) const {
  return convert_list<double>(lookup(key), key);
}
std::vector<std::int64_t> Params::integers(const std::string& key) const {
  return convert_list<std::int64_t>(lookup(key), key);
}

// ---------------------------------------------------------------------------
// serialization helpers

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

std::string index_list(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

json cplx(Complex z) { return json::array({z.real(), z.imag()}); }

json mat(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cplx(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json subspace(const Subspace& s) { return {{"rank", s.rank()}, {"frame", mat(s.frame())}}; }

json finite(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json spectrum_json(const SpectrumEstimate& e) {
  double min_sep = HUGE_VAL;
  bool distinct = true;
  for (std::size_t i = 0; i + 1 < e.exponents.size(); ++i) {
    const double gap = e.exponents[i] - e.exponents[i + 1];
    min_sep = std::min(min_sep, gap);
    if (gap <= std::max(kExponentResolution, 3.0 * (e.stderr_[i] + e.stderr_[i + 1]))) distinct = false;
  }
  return {{"exponents", e.exponents}, {"stderr", e.stderr_}, {"n_steps", e.n_steps},
          {"n_orbits", e.n_orbits},    {"exact", e.exact},     {"min_separation", finite(min_sep)},
          {"distinct", distinct}};
}

json pinching_json(const PinchingReport& r) {
  return {{"exponents", r.exponents}, {"min_gap", r.min_gap}, {"tol", r.tol}, {"pass", r.pass}};
}

json uniform_pinching_json(const UniformPinchingReport& r) {
  return {{"margins", r.margins}, {"min_margin", finite(r.min_margin)}, {"tol_dom", r.tol_dom},
          {"N", r.n},             {"pass", r.pass}};
}

json twisting_json(const TwistingReport& r) {
  json minors = json::array();
  for (const auto& m : r.minors)
    minors.push_back({{"rows", m.rows},
                      {"cols", m.cols},
                      {"min_abs", finite(m.min_abs)},
                      {"max_abs", m.max_abs},
                      {"slope", m.slope},
                      {"zero", m.zero}});
  return {{"min_minor", finite(r.min_minor)},
          {"max_abs_slope", r.max_abs_slope},
          {"tol_slope", r.tol_slope},
          {"tol_margin", r.tol_margin},
          {"sample_uniform", r.sample_uniform},
          {"sample_nonuniform", r.sample_nonuniform},
          {"uniform_pass", r.uniform_pass},
          {"nonuniform_pass", r.nonuniform_pass},
          {"minors", minors}};
}

std::string twisting_csv(const TwistingReport& r) {
  Csv csv({"rows", "cols", "min_abs", "max_abs", "slope", "zero"});
  for (const auto& m : r.minors)
    csv.row({index_list(m.rows), index_list(m.cols), num(m.min_abs), num(m.max_abs), num(m.slope),
             m.zero ? "1" : "0"});
  return csv.str();
}

json certificate_json(const TheoremCCertificate& c) {
  return {{"d", c.d},
          {"relation_bound", c.relation_bound},
          {"min_relation", finite(c.min_relation)},
          {"min_minor", c.min_minor},
          {"tol_margin", c.tol_margin},
          {"radius", c.radius},
          {"bunching_ratio", c.bunching_ratio},
          {"fiber_bunched", c.fiber_bunched},
          {"ok", c.ok}};
}

TwistingOptions twisting_options(const Params& p, int threads) {
  TwistingOptions o;
  o.n_oseledets = static_cast<int>(p.integer("n_oseledets"));
  o.tol_slope = p.real("tol_slope");
  o.tol_margin = p.real("tol_margin");
  o.zero_threshold = p.real("zero_threshold");
  o.max_points = static_cast<int>(p.integer("max_points"));
  o.threads = threads;
  return o;
}

SpectrumOptions spectrum_options(const Params& p, int threads) {
  SpectrumOptions o;
  o.k_renorm = static_cast<int>(p.integer("k_renorm"));
  o.burn_in = p.integer("burn_in");
  o.allow_exact = p.flag("allow_exact");
  o.threads = threads;
  return o;
}

int sub_rank(const Context& c, const Params& p) {
  const auto l = p.integer("l");
  require(l >= 1 && l < c.gen.dim(), ErrorKind::InvalidConfig, "parameter l must satisfy 1 <= l < d");
  return static_cast<int>(l);
}

// ---------------------------------------------------------------------------
// ops

const std::vector<ParamDoc> kSpectrumParams{
    {"n_steps", "100000", "iterates per orbit"},
    {"n_orbits", "8", "independent mu-typical orbits"},
    {"k_renorm", "5", "QR re-orthonormalization interval"},
    {"burn_in", "-1", "discarded iterates; -1 means min(n_steps/10, 1000)"},
    {"allow_exact", "true", "closed form for constant diagonal generators"},
};

const std::vector<ParamDoc> kTwistingParams{
    {"n_oseledets", "200", "iterates used to resolve the Oseledets lines"},
    {"tol_slope", "1e-2", "largest admissible |slope| of log|minor| per iterate"},
    {"tol_margin", "1e-6", "smallest admissible |minor| for uniform twisting"},
    {"zero_threshold", "1e-8", "minors below this count as vanishing"},
    {"max_points", "64", "orbit points evaluated per sample, evenly spaced"},
};

std::vector<ParamDoc> join(std::vector<ParamDoc> a, const std::vector<ParamDoc>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

OpResult op_spectrum(const Context& c, const Params& p, std::uint64_t seed) {
  const auto est = lyapunov_spectrum(c.gen, c.dyn, c.spec, p.integer("n_steps"),
                                     static_cast<int>(p.integer("n_orbits")), seed,
                                     spectrum_options(p, c.threads));
  Csv csv({"index", "value", "stderr"});
  for (std::size_t i = 0; i < est.exponents.size(); ++i)
    csv.row({std::to_string(i + 1), num(est.exponents[i]), num(est.stderr_[i])});
  return {spectrum_json(est), csv.str()};
}

OpResult op_adjoint_spectrum(const Context& c, const Params& p, std::uint64_t seed) {
  const auto opts = spectrum_options(p, c.threads);
  const auto n = p.integer("n_steps");
  const auto orbits = static_cast<int>(p.integer("n_orbits"));
  const auto orig = lyapunov_spectrum(c.gen, c.dyn, c.spec, n, orbits, seed, opts);
  const auto adj = lyapunov_spectrum(adjoint_cocycle(c.gen, c.dyn), c.dyn.inverse(), c.spec, n,
                                     orbits, seed, opts);
  Csv csv({"index", "original", "original_stderr", "adjoint", "adjoint_stderr"});
  std::vector<double> diff, pooled;
  bool agree = true;
  for (std::size_t i = 0; i < orig.exponents.size(); ++i) {
    diff.push_back(std::abs(orig.exponents[i] - adj.exponents[i]));
    pooled.push_back(std::hypot(orig.stderr_[i], adj.stderr_[i]));
    agree = agree && diff.back() <= 3.0 * pooled.back();
    csv.row({std::to_string(i + 1), num(orig.exponents[i]), num(orig.stderr_[i]),
             num(adj.exponents[i]), num(adj.stderr_[i])});
  }
  json r{{"original", spectrum_json(orig)},
         {"adjoint", spectrum_json(adj)},
         {"abs_diff", diff},
         {"pooled_stderr", pooled},
         {"agree", agree}};
  return {r, csv.str()};
}

OpResult op_pinching(const Context& c, const Params& p, std::uint64_t seed) {
  const auto r = check_pinching(c.gen, c.dyn, c.p, p.reals("t_samples"), p.integer("n"),
                                p.real("tol"), seed);
  return {pinching_json(r), {}};
}

OpResult op_uniform_pinching(const Context& c, const Params& p, std::uint64_t) {
  const auto r = check_uniform_pinching(c.gen, c.dyn, c.p, p.reals("t_grid"),
                                        static_cast<int>(p.integer("N")), p.real("tol_dom"));
  return {uniform_pinching_json(r), {}};
}

OpResult op_twisting_matrix(const Context& c, const Params& p, std::uint64_t) {
  const Matrix b = twisting_matrix(c.gen, c.dyn, c.p, c.z, p.real("t"),
                                   static_cast<int>(p.integer("n_oseledets")));
  Csv csv({"row", "col", "re", "im"});
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      csv.row({std::to_string(i), std::to_string(j), num(b(i, j).real()), num(b(i, j).imag())});
  json minors = json::array();
  for (const auto& m : all_minors(b)) minors.push_back({{"rows", m.rows}, {"cols", m.cols}, {"abs", std::abs(m.value)}});
  return {{{"t", p.real("t")}, {"return_time", c.z.return_time}, {"B", mat(b)}, {"minors", minors}},
          csv.str()};
}

OpResult op_twisting(const Context& c, const Params& p, std::uint64_t) {
  const auto r = check_twisting(c.gen, c.dyn, c.p, c.z, p.reals("t_samples"), p.integer("orbit_len"),
                                twisting_options(p, c.threads));
  return {twisting_json(r), twisting_csv(r)};
}

OpResult op_simplicity(const Context& c, const Params& p, std::uint64_t) {
  SimplicityConfig cfg;
  cfg.t_samples = p.reals("t_samples");
  cfg.pinching_steps = p.integer("pinching_steps");
  cfg.pinching_tol = p.real("tol");
  cfg.orbit_len = p.integer("orbit_len");
  cfg.uniform_n = static_cast<int>(p.integer("N"));
  cfg.tol_dom = p.real("tol_dom");
  cfg.twisting = twisting_options(p, c.threads);
  const auto r = check_simplicity(c.gen, c.dyn, c.p, c.z, cfg);
  json j{{"pinching", pinching_json(r.pinching)}, {"twisting", twisting_json(r.twisting)}};
  j["uniform_pinching"] = r.uniform_pinching ? uniform_pinching_json(*r.uniform_pinching) : json(nullptr);
  if (c.certificate) j["certificate"] = certificate_json(*c.certificate);
  j["overall"] = r.overall;
  j["uniform_overall"] = r.uniform_overall;
  return {j, twisting_csv(r.twisting)};
}

OpResult op_certificate(const Context& c, const Params&, std::uint64_t) {
  require(c.certificate.has_value(), ErrorKind::InvalidConfig,
          "theoremC_certificate needs cocycle.kind = theoremC");
  return {certificate_json(*c.certificate), {}};
}

OpResult op_openness(const Context& c, const Params& p, std::uint64_t seed) {
  OpennessOptions o;
  o.t_grid = p.reals("t_grid");
  o.uniform_n = static_cast<int>(p.integer("N"));
  o.t_samples = p.reals("t_samples");
  o.orbit_len = p.integer("orbit_len");
  o.twisting.max_points = static_cast<int>(p.integer("max_points"));
  o.threads = c.threads;
  const auto r = openness_probe(c.gen, c.dyn, c.p, c.z, p.real("delta"),
                                static_cast<int>(p.integer("trials")), seed, o);
  Csv csv({"trial", "preserved", "noise_norm"});
  for (std::size_t i = 0; i < r.per_trial.size(); ++i)
    csv.row({std::to_string(i), r.per_trial[i] ? "1" : "0", num(r.noise_norm[i])});
  json j{{"delta", p.real("delta")}, {"trials", r.trials},   {"preserved", r.preserved},
         {"fraction", r.fraction},   {"baseline", r.baseline}, {"noise_norm", r.noise_norm},
         {"pass", r.preserved == r.trials}};
  return {j, csv.str()};
}

OpResult op_bunching(const Context& c, const Params& p, std::uint64_t seed) {
  const auto r = check_fiber_bunching(c.gen, c.dyn, c.spec, static_cast<int>(p.integer("N")),
                                      static_cast<int>(p.integer("samples")), seed, p.real("alpha"));
  const double l = holonomy_constant(c.gen, c.spec, r, static_cast<int>(p.integer("holder_samples")), seed);
  Csv csv({"n", "log_curve"});
  for (std::size_t i = 0; i < r.log_curve.size(); ++i) csv.row({std::to_string(i + 1), num(r.log_curve[i])});
  json j{{"slope", r.slope},          {"theta", r.theta}, {"constant", r.constant},
         {"holonomy_constant", finite(l)}, {"pass", r.pass}, {"log_curve", r.log_curve}};
  return {j, csv.str()};
}

OpResult op_holonomy_axioms(const Context& c, const Params& p, std::uint64_t seed) {
  const auto b = check_fiber_bunching(c.gen, c.dyn, c.spec, static_cast<int>(p.integer("N")),
                                      static_cast<int>(p.integer("samples")), seed);
  require(b.pass, ErrorKind::NoConvergence, "cocycle is not fiber bunched; holonomies may not exist");
  const double l = holonomy_constant(c.gen, c.spec, b, static_cast<int>(p.integer("holder_samples")), seed);
  const auto r = check_holonomy_axioms(c.gen, c.dyn, c.spec, static_cast<int>(p.integer("pairs")), l,
                                       seed, p.real("tol"));
  return {{{"pairs", r.pairs},
           {"equivariance_error", r.equivariance_error},
           {"composition_error", r.composition_error},
           {"holder_ratio", r.holder_ratio},
           {"holonomy_constant", r.constant_l},
           {"tol", r.tol},
           {"equivariance", r.equivariance},
           {"composition", r.composition},
           {"holder", r.holder},
           {"pass", r.equivariance && r.composition && r.holder}},
          {}};
}

OpResult op_holder_norm(const Context& c, const Params& p, std::uint64_t seed) {
  const int n = static_cast<int>(p.integer("samples"));
  return {{{"holder_norm", holder_norm_estimate(c.gen, c.spec, n, seed)},
           {"holder_constant", holder_constant_estimate(c.gen, c.spec, n, seed)},
           {"alpha", c.gen.holder_alpha()},
           {"samples", n}},
          {}};
}

OpResult op_mostly_neutral(const Context& c, const Params& p, std::uint64_t seed) {
  const auto r = check_mostly_neutral(c.family, c.spec, static_cast<int>(p.integer("n_max")),
                                      static_cast<int>(p.integer("samples")),
                                      p.real("declared_bound"), seed);
  return {{{"bound_estimate", r.bound_estimate}, {"declared_bound", r.declared_bound}, {"pass", r.pass}}, {}};
}

OpResult op_center_exponent(const Context& c, const Params& p, std::uint64_t seed) {
  const auto r = center_exponent(c.family, c.spec, static_cast<int>(p.integer("n_steps")),
                                 static_cast<int>(p.integer("n_orbits")), seed);
  const double tol = p.real("tol");
  return {{{"forward", r.forward},
           {"backward", r.backward},
           {"stderr_forward", r.stderr_forward},
           {"tol", tol},
           {"neutral", std::abs(r.forward) < tol && std::abs(r.backward) < tol}},
          {}};
}

FiberedPoint block_point(const Context& c, std::uint64_t seed) {
  return sample_fibered(c.spec, hash_pair(seed, 0x9017u));
}

OpResult op_oseledets(const Context& c, const Params& p, std::uint64_t seed) {
  const int n = static_cast<int>(p.integer("n"));
  const auto r = p.flag("on_fiber")
                     ? oseledets_split_on_fiber(c.gen, c.dyn, c.p, p.real("t"), n, 1e-10, true)
                     : oseledets_split(c.gen, c.dyn, block_point(c, seed), n, 1e-10, true, seed);
  json lines = json::array();
  for (const auto& l : r.lines) lines.push_back(subspace(l));
  return {{{"t", r.point.t},
           {"exponents", r.exponents},
           {"min_angle", r.min_angle},
           {"defect", r.defect},
           {"converged", r.converged},
           {"lines", lines}},
          {}};
}

OpResult op_pushforward(const Context& c, const Params& p, std::uint64_t seed) {
  const int d = c.gen.dim();
  const int l = sub_rank(c, p);
  const auto n_list = p.integers("n_list");
  const auto measures = p.integer("measures");
  const double diam_tol = p.real("diameter_tol");
  const double agree_tol = p.real("agree_tol");
  require(measures >= 1 && !n_list.empty(), ErrorKind::InvalidConfig,
          "backward_pushforward needs measures >= 1 and a nonempty n_list");
  const FiberedPoint point = block_point(c, seed);
  const Subspace xi = section_xi(c.gen, c.dyn, point, l, p.integer("section_n"));

  Csv csv({"measure", "n", "diameter", "dist_to_xi"});
  std::vector<Subspace> limits;
  json per = json::array();
  bool all_reached = true;
  double xi_err = 0.0;
  for (std::int64_t m = 0; m < measures; ++m) {
    const auto m0 = AtomicGrassMeasure::random(d, l, static_cast<int>(p.integer("atoms")),
                                               hash_pair(seed, static_cast<std::uint64_t>(m)));
    const auto steps = backward_pushforward_experiment(c.gen, c.dyn, point, m0, n_list, c.threads);
    json reached = nullptr;
    for (const auto& s : steps) {
      const double dx = grass_distance(s.measure.atoms().front(), xi);
      csv.row({std::to_string(m), std::to_string(s.n), num(s.diameter), num(dx)});
      if (reached.is_null() && s.diameter < diam_tol) reached = s.n;
    }
    all_reached = all_reached && !reached.is_null();
    limits.push_back(steps.back().measure.atoms().front());
    xi_err = std::max(xi_err, grass_distance(limits.back(), xi));
    per.push_back({{"initial_diameter", m0.diameter()},
                   {"final_diameter", steps.back().diameter},
                   {"first_n_below_tol", reached}});
  }
  double pairwise = 0.0;
  for (std::size_t i = 0; i < limits.size(); ++i)
    for (std::size_t j = i + 1; j < limits.size(); ++j)
      pairwise = std::max(pairwise, grass_distance(limits[i], limits[j]));
  json j{{"rank", l},
         {"measures", per},
         {"limit_pairwise_distance", pairwise},
         {"limit_distance_to_xi", xi_err},
         {"diameter_tol", diam_tol},
         {"agree_tol", agree_tol},
         {"pass", all_reached && pairwise <= agree_tol && xi_err <= agree_tol}};
  return {j, csv.str()};
}

OpResult op_section_xi(const Context& c, const Params& p, std::uint64_t seed) {
  const FiberedPoint point = block_point(c, seed);
  const Subspace xi = section_xi(c.gen, c.dyn, point, sub_rank(c, p), p.integer("n"), p.real("tol"));
  return {{{"t", point.t}, {"xi", subspace(xi)}}, {}};
}

OpResult op_complementary(const Context& c, const Params& p, std::uint64_t seed) {
  const FiberedPoint point = block_point(c, seed);
  const auto r = complementary_section(c.gen, c.dyn, point, sub_rank(c, p), p.integer("n"), p.real("tol"));
  return {{{"t", point.t}, {"min_angle", r.min_angle}, {"xi", subspace(r.xi)}, {"eta", subspace(r.eta)}}, {}};
}

OpResult op_hyperplane_mass(const Context& c, const Params& p, std::uint64_t seed) {
  const int d = c.gen.dim();
  const int l = sub_rank(c, p);
  const auto m = AtomicGrassMeasure::random(d, l, static_cast<int>(p.integer("atoms")), seed);
  const double tol = p.real("tol_angle");
  Rng rng(hash_pair(seed, 0x4e11u));
  double worst_random = 0.0;
  Csv csv({"probe", "mass"});
  for (std::int64_t i = 0; i < p.integer("probes"); ++i) {
    const Subspace v(random_gaussian(d, d - l, rng));
    const double mass = hyperplane_mass(m, v, tol);
    worst_random = std::max(worst_random, mass);
    csv.row({std::to_string(i), num(mass)});
  }
  // a hyperplane through the first atom carries at least that atom's weight
  double adversarial = 0.0;
  if (2 * l <= d) {
    Matrix through(d, d - l);
    through << m.atoms().front().frame(), random_gaussian(d, d - 2 * l, rng);
    adversarial = hyperplane_mass(m, Subspace(through), tol);
  }
  return {{{"max_random_mass", worst_random},
           {"adversarial_mass", adversarial},
           {"atom_weight", m.weights().front()}},
          csv.str()};
}

OpResult op_gap(const Context& c, const Params& p, std::uint64_t seed) {
  const int d = c.gen.dim();
  const int l = sub_rank(c, p);
  const auto n = p.integer("n");
  const FiberedPoint point = block_point(c, seed);
  const auto cs = complementary_section(c.gen, c.dyn, point, l, p.integer("section_n"));
  const double rate = log_gap_functional(c.gen, c.dyn, point, n, cs.xi, cs.eta) / static_cast<double>(n);
  const auto est = lyapunov_spectrum(c.gen, c.dyn, c.spec, p.integer("spectrum_steps"),
                                     static_cast<int>(p.integer("n_orbits")), seed,
                                     SpectrumOptions{5, -1, true, c.threads});
  double lu = 0.0, ls = 0.0;
  for (int i = 0; i < l; ++i) lu += est.exponents[static_cast<std::size_t>(i)] / l;
  for (int i = l; i < d; ++i) ls += est.exponents[static_cast<std::size_t>(i)] / (d - l);
  const double predicted = static_cast<double>(d - l) / d * (lu - ls);
  const double tol = p.real("tol");
  return {{{"n", n},
           {"rate", rate},
           {"predicted", predicted},
           {"abs_error", std::abs(rate - predicted)},
           {"tol", tol},
           {"pass", rate > 0.0 && std::abs(rate - predicted) <= tol}},
          {}};
}

OpResult op_induced(const Context& c, const Params& p, std::uint64_t seed) {
  const auto word_raw = p.integers("word");
  Word word;
  double cyl = 1.0;
  for (auto s : word_raw) {
    require(s >= 0 && s < c.scenario.alphabet, ErrorKind::InvalidConfig, "word symbol outside the alphabet");
    word.push_back(static_cast<Symbol>(s));
    cyl *= c.scenario.weights[static_cast<std::size_t>(s)];
  }
  require(!word.empty(), ErrorKind::InvalidConfig, "induced_cocycle needs a nonempty word");
  const auto r = induced_statistics(c.gen, c.dyn, c.spec, cylinder_region(word, p.integer("position")),
                                    p.integer("n_max"), static_cast<int>(p.integer("n_orbits")), seed);
  const double kac = 1.0 / cyl;
  const double se = std::hypot(r.induced_stderr, kac * r.original_stderr);
  const double rel = std::abs(r.mean_return - kac) / kac;
  return {{{"mean_return", r.mean_return},
           {"mean_return_stderr", r.mean_return_stderr},
           {"kac_return", kac},
           {"kac_rel_error", rel},
           {"induced_top", r.induced_top},
           {"induced_stderr", r.induced_stderr},
           {"original_top", r.original_top},
           {"original_stderr", r.original_stderr},
           {"region_measure", r.region_measure},
           {"kac_pass", rel <= p.real("kac_tol")},
           {"rescaling_pass", std::abs(r.induced_top - kac * r.original_top) <= 3.0 * se}},
          {}};
}

const std::vector<ParamDoc> kPinchingT{{"t_samples", "[0.1, 0.35, 0.6, 0.85]", "fiber coordinates on the periodic fiber"}};

std::vector<OpInfo> make_registry() {
  std::vector<OpInfo> ops;
  ops.push_back({"lyapunov_spectrum", "Lyapunov spectrum by pooled QR iteration (CSV: index,value,stderr)",
                 kSpectrumParams, op_spectrum});
  ops.push_back({"adjoint_spectrum", "Spectra of the cocycle and of its adjoint over the inverse dynamics",
                 kSpectrumParams, op_adjoint_spectrum});
  ops.push_back({"check_pinching", "Simple spectrum of every exterior power on the periodic fiber",
                 join(kPinchingT, {{"n", "20000", "iterates per fiber sample"},
                                   {"tol", "5e-3", "smallest admissible gap between subset sums (nats)"}}),
                 op_pinching});
  ops.push_back({"check_uniform_pinching", "Singular-value domination of the compounds along the periodic fiber",
                 {{"t_grid", "[0.05, 0.3, 0.55, 0.8]", "fiber grid"},
                  {"N", "10", "steps of the compared products"},
                  {"tol_dom", "1e-3", "margins must exceed 1 + tol_dom"}},
                 op_uniform_pinching});
  ops.push_back({"twisting_matrix", "The homoclinic transport B(t) in the Oseledets basis",
                 {{"t", "0.3", "fiber coordinate on the periodic fiber"},
                  {"n_oseledets", "200", "iterates used to resolve the Oseledets lines"}},
                 op_twisting_matrix});
  ops.push_back({"check_twisting", "Minors of B along fiber orbits (uniform and non-uniform verdicts)",
                 join({{"t_samples", "[0.1, 0.6]", "starting fiber coordinates"},
                       {"orbit_len", "10000", "length of each fiber orbit"}},
                      kTwistingParams),
                 op_twisting});
  ops.push_back({"check_simplicity", "Pinching, uniform pinching and twisting combined",
                 join(join(kPinchingT, {{"pinching_steps", "20000", "iterates per pinching sample"},
                                        {"tol", "5e-3", "pinching gap tolerance (nats)"},
                                        {"orbit_len", "10000", "twisting orbit length"},
                                        {"N", "10", "uniform pinching product length"},
                                        {"tol_dom", "1e-3", "uniform pinching margin"}}),
                      kTwistingParams),
                 op_simplicity});
  ops.push_back({"theoremC_certificate", "Non-resonance, minor and bump certificate of the scenario", {},
                 op_certificate});
  ops.push_back({"openness_probe", "Uniform simplicity under random Hölder perturbations",
                 {{"delta", "1e-4", "Hölder-norm bound of each perturbation"},
                  {"trials", "20", "number of perturbations"},
                  {"t_grid", "[0.05, 0.3, 0.55, 0.8]", "uniform pinching grid"},
                  {"N", "10", "uniform pinching product length"},
                  {"t_samples", "[0.15, 0.65]", "twisting samples"},
                  {"orbit_len", "40", "twisting orbit length per trial"},
                  {"max_points", "8", "twisting points per sample"}},
                 op_openness});
  ops.push_back({"check_fiber_bunching", "Decay of ||A^n|| ||(A^n)^-1|| lambda^(n alpha) (CSV: n,log_curve)",
                 {{"N", "40", "longest product"},
                  {"samples", "20", "sampled points"},
                  {"alpha", "-1", "Hölder exponent; -1 uses the generator's"},
                  {"holder_samples", "500", "samples for the holonomy constant"}},
                 op_bunching});
  ops.push_back({"holonomy_axioms", "Equivariance, composition and Hölder bound of strong-stable holonomies",
                 {{"pairs", "100", "random strong-stable triples"},
                  {"N", "40", "bunching fit length"},
                  {"samples", "20", "bunching samples"},
                  {"holder_samples", "500", "samples for the holonomy constant"},
                  {"tol", "1e-8", "relative tolerance for the identities"}},
                 op_holonomy_axioms});
  ops.push_back({"holder_norm", "Sampled Hölder norm of the generator",
                 {{"samples", "1000", "sampled pairs"}}, op_holder_norm});
  ops.push_back({"check_mostly_neutral", "Sampled bound on the fiber derivatives",
                 {{"n_max", "1000", "longest composition"},
                  {"samples", "8", "sampled base points"},
                  {"declared_bound", "10", "bound the family must respect"}},
                 op_mostly_neutral});
  ops.push_back({"center_exponent", "Fiber Lyapunov exponent, forward and backward",
                 {{"n_steps", "100000", "iterates per orbit"},
                  {"n_orbits", "4", "orbits"},
                  {"tol", "1e-8", "neutrality threshold"}},
                 op_center_exponent});
  ops.push_back({"oseledets_split", "Oseledets lines by flag intersection",
                 {{"n", "200", "flag length"},
                  {"on_fiber", "false", "use the periodic fiber instead of a sampled point"},
                  {"t", "0.3", "fiber coordinate when on_fiber is set"}},
                 op_oseledets});
  ops.push_back({"backward_pushforward", "Push-forwards of random atomic measures by A^n(f^-n p) (CSV: measure,n,diameter,dist_to_xi)",
                 {{"l", "1", "rank of the Grassmannian"},
                  {"atoms", "50", "atoms per initial measure"},
                  {"measures", "3", "independent initial measures"},
                  {"n_list", "[10, 50, 100, 200, 500]", "push-forward lengths"},
                  {"section_n", "200", "length used for the section xi"},
                  {"diameter_tol", "1e-6", "support diameter treated as a Dirac mass"},
                  {"agree_tol", "1e-5", "agreement of limits with each other and with xi"}},
                 op_pushforward});
  ops.push_back({"section_xi", "The invariant section xi at a sampled point",
                 {{"l", "1", "rank"}, {"n", "200", "product length"}, {"tol", "1e-6", "stabilization tolerance"}},
                 op_section_xi});
  ops.push_back({"complementary_section", "xi together with the complement of the adjoint section",
                 {{"l", "1", "rank"}, {"n", "200", "product length"}, {"tol", "1e-6", "stabilization tolerance"}},
                 op_complementary});
  ops.push_back({"hyperplane_mass", "Mass of random atomic measures on hyperplane sections",
                 {{"l", "1", "rank"},
                  {"atoms", "50", "atoms"},
                  {"probes", "100", "random complementary subspaces"},
                  {"tol_angle", "1e-6", "angle below which an atom meets the subspace"}},
                 op_hyperplane_mass});
  ops.push_back({"gap_functional", "Growth rate of the gap functional against the spectral prediction",
                 {{"l", "1", "rank of the unstable section"},
                  {"n", "100000", "orbit length"},
                  {"section_n", "200", "length used for the sections"},
                  {"spectrum_steps", "100000", "iterates for the reference spectrum"},
                  {"n_orbits", "8", "orbits for the reference spectrum"},
                  {"tol", "5e-3", "allowed deviation from the prediction"}},
                 op_gap});
  ops.push_back({"induced_cocycle", "First-return cocycle on a cylinder: Kac and rescaling checks",
                 {{"word", "[0]", "cylinder word"},
                  {"position", "0", "index of the first symbol"},
                  {"n_max", "100000", "iterates per orbit"},
                  {"n_orbits", "8", "orbits"},
                  {"kac_tol", "0.02", "relative tolerance on the mean return time"}},
                 op_induced});
  return ops;
}

}  // namespace

const std::vector<OpInfo>& op_registry() {
  static const std::vector<OpInfo> ops = make_registry();
  return ops;
}

const OpInfo* find_op(const std::string& name) {
  for (const auto& op : op_registry())
    if (op.name == name) return &op;
  return nullptr;
}

void check_params(const std::string& op, const YAML::Node& params, int dim) {
  const OpInfo* info = find_op(op);
  if (!info) fail(ErrorKind::UnknownOp, "unknown op '" + op + "'");
  if (!params) return;
  for (const auto& kv : params) {
    const auto key = kv.first.as<std::string>();
    const auto it = std::find_if(info->params.begin(), info->params.end(),
                                 [&](const ParamDoc& d) { return d.name == key; });
    if (it == info->params.end())
      fail(ErrorKind::InvalidConfig, "op '" + op + "' has no parameter '" + key + "'");
    const YAML::Node def = YAML::Load(it->default_value);
    const YAML::Node& v = kv.second;
    if (def.IsSequence() != v.IsSequence())
      fail(ErrorKind::InvalidConfig, "parameter '" + key + "' of '" + op + "' has the wrong shape");
    if (def.IsSequence()) {
      convert_list<double>(v, key);
    } else if (def.as<std::string>() == "true" || def.as<std::string>() == "false") {
      convert<bool>(v, key);
    } else {
      convert<double>(v, key);
    }
    if (key == "l") {
      const auto l = convert<int>(v, key);
      if (l < 1 || l >= dim) fail(ErrorKind::InvalidConfig, "parameter l must satisfy 1 <= l < d");
    }
  }
}

std::string describe_op(const std::string& name) {
  const OpInfo* info = find_op(name);
  if (!info) fail(ErrorKind::UnknownOp, "unknown op '" + name + "'");
  std::ostringstream out;
  out << info->name << ": " << info->summary << "\n";
  if (info->params.empty()) out << "  (no parameters)\n";
  for (const auto& p : info->params)
    out << "  " << p.name << " (default " << p.default_value << "): " << p.doc << "\n";
  return out.str();
}

}  // namespace cocycle::cli
