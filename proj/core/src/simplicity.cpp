#include "cocycle/simplicity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "cocycle/error.hpp"
#include "cocycle/parallel.hpp"
#include "cocycle/random.hpp"
#include "cocycle/stats.hpp"

namespace cocycle {

namespace {

double min_subset_gap(const std::vector<double>& ex, int k) {
  std::vector<double> sums;
  for (const auto& idx : combinations(static_cast<int>(ex.size()), k)) {
    double s = 0.0;
    for (int i : idx) s += ex[static_cast<std::size_t>(i)];
    sums.push_back(s);
  }
  std::sort(sums.begin(), sums.end());
  double gap = HUGE_VAL;
  for (std::size_t i = 1; i < sums.size(); ++i) gap = std::min(gap, sums[i] - sums[i - 1]);
  return gap;
}

}  // namespace

PinchingReport check_pinching(const CocycleGenerator& gen, const SkewProduct& dyn,
                              const BiSequence& p, const std::vector<double>& t_samples,
                              std::int64_t n, double tol, std::uint64_t seed) {
  require(!t_samples.empty(), ErrorKind::PreconditionViolation, "pinching needs t samples");
  const int d = gen.dim();
  PinchingReport rep;
  rep.tol = tol;
  if (auto tau = gen.constant_diagonal()) {
    for (const auto& v : *tau) rep.exponents.push_back(std::log(std::abs(v)));
    std::sort(rep.exponents.begin(), rep.exponents.end(), std::greater<>());
    rep.per_sample.assign(t_samples.size(), rep.exponents);
  } else {
    std::vector<FiberedPoint> starts;
    for (double t : t_samples) starts.push_back({p, wrap_circle(t)});
    const SpectrumEstimate est = orbit_spectrum(gen, dyn, starts, n, seed);
    rep.exponents = est.exponents;
    rep.per_sample = est.per_orbit;
  }
  rep.pass = true;
  for (int k = 1; k <= d - 1; ++k) {
    const double g = min_subset_gap(rep.exponents, k);
    rep.min_gap.push_back(g);
    if (!(g > tol)) rep.pass = false;
  }
  return rep;
}

UniformPinchingReport check_uniform_pinching(const CocycleGenerator& gen, const SkewProduct& dyn,
                                             const BiSequence& p,
                                             const std::vector<double>& t_grid, int n,
                                             double tol_dom) {
  require(n >= 1 && !t_grid.empty(), ErrorKind::PreconditionViolation,
          "uniform pinching needs N >= 1 and a nonempty grid");
  const int d = gen.dim();
  UniformPinchingReport rep;
  rep.tol_dom = tol_dom;
  rep.n = n;
  for (int k = 1; k <= d - 1; ++k)
    rep.margins.emplace_back(static_cast<std::size_t>(binomial(d, k) - 1), HUGE_VAL);
  for (double t : t_grid) {
    const Matrix an = iterate(gen, dyn, {p, wrap_circle(t)}, n, true).m;
    for (int k = 1; k <= d - 1; ++k) {
      const RealVector s = singular_values(compound_matrix(an, k));
      auto& row = rep.margins[static_cast<std::size_t>(k - 1)];
      for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(s.size()); ++i) {
        const double lo = s(static_cast<Eigen::Index>(i) + 1);
        const double ratio = lo > 0.0 ? s(static_cast<Eigen::Index>(i)) / lo : HUGE_VAL;
        row[i] = std::min(row[i], ratio);
      }
    }
  }
  for (const auto& row : rep.margins)
    for (double m : row) rep.min_margin = std::min(rep.min_margin, m);
  rep.pass = rep.min_margin > 1.0 + tol_dom;
  return rep;
}

Homoclinic homoclinic_for(const SkewProduct& dyn, const Homoclinic& h) {
  if (!dyn.reversed()) return h;
  return {h.point.shifted(h.return_time), h.return_time};
}

Matrix twisting_matrix(const CocycleGenerator& gen, const SkewProduct& dyn, const BiSequence& p,
                       const Homoclinic& z, double t, int n_oseledets, double tol) {
  const int d = gen.dim();
  t = wrap_circle(t);
  if (z.return_time == 0) return Matrix::Identity(d, d);
  const FiberedPoint pt{p, t};
  const double s = fiber_holonomy(dyn, p, z.point, t, Leaf::Unstable);
  const FiberedPoint zs{z.point, s};
  const FiberedPoint end = dyn.iterate(zs, z.return_time);
  const double s2 = fiber_holonomy(dyn, end.base, p, end.t, Leaf::Stable);
  const FiberedPoint ps{p, s2};

  const OseledetsSplit at_t = oseledets_split(gen, dyn, pt, n_oseledets, tol);
  const OseledetsSplit at_s = oseledets_split(gen, dyn, ps, n_oseledets, tol);

  const Matrix hs = strong_holonomy(gen, dyn, ps, end, Leaf::Stable).matrix;
  const ScaledMatrix back = iterate(gen, dyn, end, -z.return_time, true);
  const Matrix hu = strong_holonomy(gen, dyn, zs, pt, Leaf::Unstable).matrix;

  Matrix v = hu * back.m * hs * at_s.frame;
  for (int i = 0; i < d; ++i) v.col(i).normalize();
  const Matrix coeff = at_t.frame.fullPivLu().solve(v);
  return coeff.transpose();
}

TwistingReport check_twisting(const CocycleGenerator& gen, const SkewProduct& dyn,
                              const BiSequence& p, const Homoclinic& z,
                              const std::vector<double>& t_samples, std::int64_t orbit_len,
                              const TwistingOptions& opts) {
  require(!t_samples.empty() && orbit_len >= 0, ErrorKind::PreconditionViolation,
          "twisting needs t samples and orbit_len >= 0");
  const int points = static_cast<int>(std::min<std::int64_t>(orbit_len + 1, std::max(1, opts.max_points)));
  std::vector<std::int64_t> steps;
  for (int j = 0; j < points; ++j)
    steps.push_back(points == 1 ? 0 : orbit_len * j / (points - 1));

  const std::size_t n_samples = t_samples.size();
  std::vector<std::vector<Matrix>> b(n_samples, std::vector<Matrix>(steps.size()));
  parallel_for(
      n_samples * steps.size(),
      [&](std::size_t idx) {
        const std::size_t si = idx / steps.size(), j = idx % steps.size();
        const FiberedPoint q = dyn.iterate({p, wrap_circle(t_samples[si])}, steps[j]);
        b[si][j] = twisting_matrix(gen, dyn, p, z, q.t, opts.n_oseledets);
      },
      opts.threads);

  TwistingReport rep;
  rep.tol_slope = opts.tol_slope;
  rep.tol_margin = opts.tol_margin;
  const std::vector<Minor> layout = all_minors(b[0][0]);
  for (const auto& m : layout) rep.minors.push_back({m.rows, m.cols});
  std::vector<double> xs(steps.begin(), steps.end());
  for (std::size_t si = 0; si < n_samples; ++si) {
    std::vector<std::vector<double>> logs(layout.size());
    double sample_min = HUGE_VAL, sample_slope = 0.0;
    bool sample_zero = false;
    for (std::size_t j = 0; j < steps.size(); ++j) {
      const std::vector<Minor> ms = all_minors(b[si][j]);
      for (std::size_t k = 0; k < ms.size(); ++k) {
        const double a = std::abs(ms[k].value);
        auto& tr = rep.minors[k];
        tr.min_abs = std::min(tr.min_abs, a);
        tr.max_abs = std::max(tr.max_abs, a);
        sample_min = std::min(sample_min, a);
        if (a < opts.zero_threshold) {
          tr.zero = true;
          sample_zero = true;
        }
        logs[k].push_back(std::log(std::max(a, 1e-300)));
      }
    }
    if (steps.size() >= 2 && steps.back() > 0) {
      for (std::size_t k = 0; k < logs.size(); ++k) {
        const double sl = linear_fit(xs, logs[k]).slope;
        auto& tr = rep.minors[k];
        if (std::abs(sl) > std::abs(tr.slope)) tr.slope = sl;
        sample_slope = std::max(sample_slope, std::abs(sl));
      }
    }
    rep.sample_uniform.push_back(sample_min > opts.tol_margin);
    rep.sample_nonuniform.push_back(!sample_zero && sample_slope <= opts.tol_slope);
  }
  for (const auto& tr : rep.minors) {
    rep.min_minor = std::min(rep.min_minor, tr.min_abs);
    rep.max_abs_slope = std::max(rep.max_abs_slope, std::abs(tr.slope));
  }
  rep.uniform_pass = std::all_of(rep.sample_uniform.begin(), rep.sample_uniform.end(),
                                 [](bool v) { return v; });
  rep.nonuniform_pass = std::all_of(rep.sample_nonuniform.begin(), rep.sample_nonuniform.end(),
                                    [](bool v) { return v; });
  return rep;
}

SimplicityReport check_simplicity(const CocycleGenerator& gen, const SkewProduct& dyn,
                                  const BiSequence& p, const Homoclinic& z,
                                  const SimplicityConfig& cfg) {
  SimplicityReport rep;
  rep.pinching = check_pinching(gen, dyn, p, cfg.t_samples, cfg.pinching_steps, cfg.pinching_tol);
  rep.uniform_pinching =
      check_uniform_pinching(gen, dyn, p, cfg.t_samples, cfg.uniform_n, cfg.tol_dom);
  if (rep.pinching.pass) {
    rep.twisting = check_twisting(gen, dyn, p, z, cfg.t_samples, cfg.orbit_len, cfg.twisting);
  } else {
    // Without pinching the Oseledets lines on the fiber are not defined, so
    // twisting is reported as failed rather than computed.
    rep.twisting.tol_slope = cfg.twisting.tol_slope;
    rep.twisting.tol_margin = cfg.twisting.tol_margin;
  }
  rep.overall = rep.pinching.pass && rep.twisting.nonuniform_pass;
  rep.uniform_overall = rep.uniform_pinching->pass && rep.twisting.uniform_pass;
  return rep;
}

bool bump_overlaps_shift(const BiSequence& z, double radius, int j) {
  // A point x lies in B(z, r) ∩ sigma^{-j} B(z, r) iff sum_i a_i < r and
  // sum_i b_i < r, where a_i, b_i are the metric weights paid at position i
  // for x_i != z_i and x_i != z_{i-j}. Coordinates are independent, so only
  // positions with z_i != z_{i-j} involve a choice.
  struct Choice {
    double a, b;
  };
  std::vector<Choice> choices;
  const int reach = kMetricCutoff + std::abs(j);
  for (int i = -reach; i <= reach; ++i) {
    if (z.coordinate(i) == z.coordinate(i - j)) continue;
    const double a = std::abs(i) <= kMetricCutoff ? std::ldexp(1.0, -std::abs(i)) : 0.0;
    const double b = std::abs(i - j) <= kMetricCutoff ? std::ldexp(1.0, -std::abs(i - j)) : 0.0;
    choices.push_back({a, b});
  }
  require(choices.size() <= 40, ErrorKind::InvalidConfig,
          "bump centre differs from its shift too often to certify disjointness");
  std::sort(choices.begin(), choices.end(),
            [](const Choice& x, const Choice& y) { return std::max(x.a, x.b) > std::max(y.a, y.b); });
  std::function<bool(std::size_t, double, double)> search = [&](std::size_t k, double sa,
                                                                double sb) -> bool {
    if (sa >= radius || sb >= radius) return false;
    if (k == choices.size()) return true;
    return search(k + 1, sa + choices[k].a, sb) || search(k + 1, sa, sb + choices[k].b);
  };
  return search(0, 0.0, 0.0);
}

TheoremCExample theoremC_example(const std::vector<Complex>& tau, const Matrix& r, double radius,
                                 const Word& core, Symbol s, double tol_margin,
                                 int relation_bound, double relation_tol) {
  const int d = static_cast<int>(tau.size());
  require(d >= 1, ErrorKind::InvalidConfig, "constant-plus-bump example needs d >= 1");
  require(r.rows() == d && r.cols() == d, ErrorKind::InvalidConfig, "R must be d x d");
  require(d <= 8, ErrorKind::InvalidConfig, "resonance scan supports d <= 8");
  for (int i = 0; i + 1 < d; ++i)
    require(std::abs(tau[static_cast<std::size_t>(i)]) > std::abs(tau[static_cast<std::size_t>(i + 1)]),
            ErrorKind::PreconditionViolation, "eigenvalue moduli must be strictly decreasing");
  for (const auto& v : tau)
    require(std::abs(v) > 0.0, ErrorKind::SingularValue, "zero eigenvalue");

  TheoremCCertificate cert;
  cert.d = d;
  cert.relation_bound = relation_bound;
  cert.tol_margin = tol_margin;
  cert.radius = radius;

  // Scan integer relations prod tau_i^{m_i} = 1 with |m_i| <= bound.
  std::vector<int> m(static_cast<std::size_t>(d), -relation_bound);
  for (;;) {
    if (std::any_of(m.begin(), m.end(), [](int v) { return v != 0; })) {
      double mod = 0.0, arg = 0.0;
      for (int i = 0; i < d; ++i) {
        mod += m[static_cast<std::size_t>(i)] * std::log(std::abs(tau[static_cast<std::size_t>(i)]));
        arg += m[static_cast<std::size_t>(i)] * std::arg(tau[static_cast<std::size_t>(i)]);
      }
      const double two_pi = 2.0 * std::numbers::pi;
      const double arg_defect = std::abs(arg - two_pi * std::round(arg / two_pi));
      const double defect = std::max(std::abs(mod), arg_defect);
      cert.min_relation = std::min(cert.min_relation, defect);
      if (defect < relation_tol)
        fail(ErrorKind::ResonantEigenvalues, "eigenvalues satisfy an integer multiplicative relation");
    }
    int i = 0;
    while (i < d && m[static_cast<std::size_t>(i)] == relation_bound) m[static_cast<std::size_t>(i++)] = -relation_bound;
    if (i == d) break;
    ++m[static_cast<std::size_t>(i)];
  }

  const Matrix id_r = Matrix::Identity(d, d) + r;
  cert.min_minor = HUGE_VAL;
  for (const auto& mi : all_minors(id_r)) cert.min_minor = std::min(cert.min_minor, std::abs(mi.value));
  require(cert.min_minor > tol_margin, ErrorKind::MinorVanishes, "a minor of id + R vanishes");

  const Homoclinic z = make_homoclinic(core, s);
  require(!bump_overlaps_shift(z.point, radius, 1) && !bump_overlaps_shift(z.point, radius, -1),
          ErrorKind::BumpOverlap, "the bump ball meets its image under the shift");

  cert.bunching_ratio = std::abs(tau.front()) / std::abs(tau.back());
  cert.fiber_bunched = cert.bunching_ratio < 1.0 / kLambda;
  cert.ok = true;

  Matrix a = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) a(i, i) = tau[static_cast<std::size_t>(i)];
  BumpSpec spec;
  spec.base = a;
  spec.r = r;
  spec.center = z.point;
  spec.radius = radius;
  spec.exponent = 1.0;
  return {CocycleGenerator::bump_perturbed(spec), cert, make_fixed_point(s), z};
}

CocycleGenerator holder_noise(const CocycleGenerator& base, int alphabet_size, double delta,
                              std::uint64_t seed, int window, int grid, double* norm_bound) {
  require(delta >= 0.0, ErrorKind::PreconditionViolation, "noise level must be >= 0");
  const int d = base.dim();
  std::size_t words = 1;
  for (int i = 0; i < 2 * window + 1; ++i) words *= static_cast<std::size_t>(alphabet_size);
  Rng rng(seed);
  TableSpec spec;
  spec.dim = d;
  spec.alphabet_size = alphabet_size;
  spec.window = window;
  spec.grid = grid;
  spec.base = base;
  for (std::size_t i = 0; i < words * static_cast<std::size_t>(grid); ++i)
    spec.values.push_back(random_gaussian(d, d, rng));
  // Hölder norm bound of the interpolated table: sup norm, plus the slope in
  // t (smoothstep slope pi/2 per cell of width 1/grid), plus jumps between
  // words at distance >= 2^{-window}.
  double sup = 0.0, lip_t = 0.0;
  for (std::size_t w = 0; w < words; ++w)
    for (int c = 0; c < grid; ++c) {
      const auto g = static_cast<std::size_t>(grid);
      const Matrix& lo = spec.values[w * g + static_cast<std::size_t>(c)];
      const Matrix& hi = spec.values[w * g + static_cast<std::size_t>((c + 1) % grid)];
      sup = std::max(sup, op_norm(lo));
      lip_t = std::max(lip_t, op_norm(hi - lo) * grid * std::numbers::pi / 2.0);
    }
  const double bound = sup + lip_t + 2.0 * sup * std::ldexp(1.0, window);
  const double scale = bound > 0.0 ? delta / bound : 0.0;
  for (auto& v : spec.values) v *= scale;
  if (norm_bound) *norm_bound = bound * scale;
  return CocycleGenerator::table_driven(spec);
}

OpennessReport openness_probe(const CocycleGenerator& gen, const SkewProduct& dyn,
                              const BiSequence& p, const Homoclinic& z, double delta, int trials,
                              std::uint64_t seed, const OpennessOptions& opts) {
  require(trials >= 1, ErrorKind::PreconditionViolation, "openness probe needs trials >= 1");
  const auto verdict = [&](const CocycleGenerator& g) {
    const auto up = check_uniform_pinching(g, dyn, p, opts.t_grid, opts.uniform_n, opts.tol_dom);
    if (!up.pass) return false;
    TwistingOptions tw = opts.twisting;
    tw.threads = 1;
    return check_twisting(g, dyn, p, z, opts.t_samples, opts.orbit_len, tw).uniform_pass;
  };
  OpennessReport rep;
  rep.trials = trials;
  rep.baseline = verdict(gen);
  rep.per_trial.assign(static_cast<std::size_t>(trials), false);
  rep.noise_norm.assign(static_cast<std::size_t>(trials), 0.0);
  parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t i) {
        bool v = rep.baseline;
        if (delta > 0.0) {
          double bound = 0.0;
          const CocycleGenerator g =
              holder_noise(gen, dyn.family().alphabet_size(), delta, hash_pair(seed, i),
                           opts.noise_window, opts.noise_grid, &bound);
          rep.noise_norm[i] = bound;
          try {
            v = verdict(g);
          } catch (const Error& e) {
            if (!is_numerical(e.kind())) throw;
            v = false;
          }
        }
        rep.per_trial[i] = v == rep.baseline;
      },
      opts.threads);
  rep.preserved = static_cast<int>(std::count(rep.per_trial.begin(), rep.per_trial.end(), true));
  rep.fraction = static_cast<double>(rep.preserved) / trials;
  return rep;
}

}  // namespace cocycle
