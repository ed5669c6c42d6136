#include "cocycle/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "cocycle/error.hpp"
#include "cocycle/parallel.hpp"
#include "cocycle/random.hpp"
#include "cocycle/stats.hpp"

namespace cocycle {

namespace {

std::vector<double> orbit_exponents(const CocycleGenerator& gen, const SkewProduct& dyn,
                                    FiberedPoint q, std::int64_t n_steps, std::int64_t burn_in,
                                    int k_renorm, Rng rng) {
  const int d = gen.dim();
  Matrix w = random_unitary(d, rng);
  for (std::int64_t j = 0; j < burn_in; ++j) {
    w = gen.evaluate(q) * w;
    q = dyn.step(q);
    if ((j + 1) % k_renorm == 0 || j + 1 == burn_in) w = orthonormalize(w);
  }
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(d));
  for (std::int64_t j = 0; j < n_steps; ++j) {
    w = gen.evaluate(q) * w;
    q = dyn.step(q);
    if ((j + 1) % k_renorm == 0 || j + 1 == n_steps) {
      const QrStep qr = qr_step(w);
      for (int i = 0; i < d; ++i) sums[static_cast<std::size_t>(i)].add(qr.log_abs_diag(i));
      w = qr.q;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    out[static_cast<std::size_t>(i)] =
        sums[static_cast<std::size_t>(i)].value() / static_cast<double>(n_steps);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

SpectrumEstimate pool(std::vector<std::vector<double>> per_orbit, std::int64_t n_steps) {
  SpectrumEstimate est;
  est.n_steps = n_steps;
  est.n_orbits = static_cast<int>(per_orbit.size());
  const std::size_t d = per_orbit.front().size();
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> col;
    col.reserve(per_orbit.size());
    for (const auto& o : per_orbit) col.push_back(o[i]);
    const MeanStderr ms = mean_stderr(col);
    est.exponents.push_back(ms.mean);
    est.stderr_.push_back(std::hypot(ms.stderr_, kStderrFloor));
  }
  est.per_orbit = std::move(per_orbit);
  return est;
}

}  // namespace

SpectrumEstimate orbit_spectrum(const CocycleGenerator& gen, const SkewProduct& dyn,
                                const std::vector<FiberedPoint>& starts, std::int64_t n_steps,
                                std::uint64_t seed, const SpectrumOptions& opts) {
  require(n_steps >= 1 && !starts.empty(), ErrorKind::PreconditionViolation,
          "spectrum needs n_steps >= 1 and at least one orbit");
  require(opts.k_renorm >= 1, ErrorKind::PreconditionViolation, "k_renorm must be >= 1");
  const std::int64_t burn =
      opts.burn_in >= 0 ? opts.burn_in : std::min<std::int64_t>(n_steps / 10, 1000);
  std::vector<std::vector<double>> per_orbit(starts.size());
  parallel_for(
      starts.size(),
      [&](std::size_t i) {
        per_orbit[i] = orbit_exponents(gen, dyn, starts[i], n_steps, burn, opts.k_renorm,
                                       Rng::stream(seed, i));
      },
      opts.threads);
  return pool(std::move(per_orbit), n_steps);
}

SpectrumEstimate lyapunov_spectrum(const CocycleGenerator& gen, const SkewProduct& dyn,
                                   const MeasureSpec& spec, std::int64_t n_steps, int n_orbits,
                                   std::uint64_t seed, const SpectrumOptions& opts) {
  require(n_steps >= 100, ErrorKind::PreconditionViolation, "lyapunov_spectrum needs n_steps >= 100");
  require(n_orbits >= 1, ErrorKind::PreconditionViolation, "lyapunov_spectrum needs n_orbits >= 1");
  if (opts.allow_exact) {
    if (auto tau = gen.constant_diagonal()) {
      SpectrumEstimate est;
      for (const auto& v : *tau) est.exponents.push_back(std::log(std::abs(v)));
      std::sort(est.exponents.begin(), est.exponents.end(), std::greater<>());
      est.stderr_.assign(est.exponents.size(), 0.0);
      est.n_steps = n_steps;
      est.n_orbits = n_orbits;
      est.exact = true;
      return est;
    }
  }
  std::vector<FiberedPoint> starts;
  starts.reserve(static_cast<std::size_t>(n_orbits));
  for (int i = 0; i < n_orbits; ++i)
    starts.push_back(sample_fibered(spec, hash_pair(seed, static_cast<std::uint64_t>(i))));
  return orbit_spectrum(gen, dyn, starts, n_steps, hash_pair(seed, 0xf4a3e5ULL), opts);
}

namespace {

struct Flag {
  Matrix q;
  std::vector<double> rates;
};

// Generic frame pushed n steps starting at `from`, forward (A) or backward
// (A^{-1}); QR after every step. Rates are averaged over the second half.
Flag push_flag(const CocycleGenerator& gen, const SkewProduct& dyn, FiberedPoint from, int n,
               bool forward, Rng rng) {
  const int d = gen.dim();
  Matrix w = random_unitary(d, rng);
  std::vector<double> sums(static_cast<std::size_t>(d), 0.0);
  const int half = n / 2;
  for (int k = 0; k < n; ++k) {
    if (forward) {
      w = gen.evaluate(from) * w;
      from = dyn.step(from);
    } else {
      from = dyn.step_back(from);
      w = checked_inverse(gen.evaluate(from)) * w;
    }
    const QrStep qr = qr_step(w);
    w = qr.q;
    if (k >= half)
      for (int i = 0; i < d; ++i) sums[static_cast<std::size_t>(i)] += qr.log_abs_diag(i);
  }
  Flag f{w, {}};
  for (double s : sums) f.rates.push_back(s / std::max(1, n - half));
  return f;
}

}  // namespace

OseledetsSplit oseledets_split(const CocycleGenerator& gen, const SkewProduct& dyn,
                               const FiberedPoint& point, int n, double tol, bool compute_defect,
                               std::uint64_t seed) {
  require(n >= 2, ErrorKind::PreconditionViolation, "oseledets split needs n >= 2");
  const int d = gen.dim();
  const Flag fwd = push_flag(gen, dyn, dyn.iterate(point, -n), n, true, Rng::stream(seed, 1));
  const Flag bwd = push_flag(gen, dyn, dyn.iterate(point, n), n, false, Rng::stream(seed, 2));

  OseledetsSplit out;
  out.point = point;
  out.exponents = fwd.rates;
  double min_gap = HUGE_VAL;
  for (int i = 0; i + 1 < d; ++i)
    min_gap = std::min(min_gap, out.exponents[static_cast<std::size_t>(i)] -
                                    out.exponents[static_cast<std::size_t>(i + 1)]);
  if (d > 1)
    require(min_gap > kExponentResolution, ErrorKind::DegenerateSplit,
            "Lyapunov exponents on this orbit are not separated (pinching fails)");
  out.converged = d == 1 || std::exp(-n * min_gap) < tol;

  out.frame = Matrix(d, d);
  for (int i = 1; i <= d; ++i) {
    Vector v;
    if (i == 1) {
      v = fwd.q.col(0);
    } else {
      // E^i = F_i ∩ G_{d-i+1}; the last i-1 backward columns span the
      // orthogonal complement of G_{d-i+1}.
      const Matrix comp = bwd.q.rightCols(i - 1);
      const Matrix m = comp.adjoint() * fwd.q.leftCols(i);
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
      v = fwd.q.leftCols(i) * svd.matrixV().col(i - 1);
    }
    out.lines.push_back(Subspace::span_of(v));
    out.frame.col(i - 1) = out.lines.back().frame().col(0);
  }
  out.min_angle = d == 1 ? std::numbers::pi / 2 : HUGE_VAL;
  for (int i = 0; i < d && d > 1; ++i) {
    Matrix others(d, d - 1);
    for (int j = 0, c = 0; j < d; ++j)
      if (j != i) others.col(c++) = out.frame.col(j);
    const double ang = min_principal_angle(out.lines[static_cast<std::size_t>(i)],
                                           Subspace(orthonormalize(others)));
    out.min_angle = std::min(out.min_angle, ang);
  }
  require(out.min_angle >= 1e-8, ErrorKind::DegenerateSplit,
          "Oseledets lines are numerically dependent");

  if (compute_defect) {
    const OseledetsSplit next = oseledets_split(gen, dyn, dyn.step(point), n, tol, false, seed);
    const Matrix a = gen.evaluate(point);
    out.defect = 0.0;
    for (int i = 0; i < d; ++i)
      out.defect = std::max(out.defect, line_angle(a * out.frame.col(i), next.frame.col(i)));
  }
  return out;
}

OseledetsSplit oseledets_split_on_fiber(const CocycleGenerator& gen, const SkewProduct& dyn,
                                        const BiSequence& p, double t, int n, double tol,
                                        bool compute_defect) {
  require(p.agrees_on(p.shifted(1), -kMembershipHorizon, kMembershipHorizon),
          ErrorKind::PreconditionViolation, "base point is not a fixed point of the shift");
  return oseledets_split(gen, dyn, FiberedPoint{p, wrap_circle(t)}, n, tol, compute_defect);
}

Eccentricity eccentricity(const Matrix& l_mat, int l) {
  const int d = static_cast<int>(l_mat.rows());
  require(l >= 1 && l <= d - 1, ErrorKind::PreconditionViolation, "eccentricity needs 1 <= l <= d-1");
  Eigen::JacobiSVD<Matrix> svd(l_mat, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  Eccentricity e;
  e.value = s(l) > 0.0 ? s(l - 1) / s(l) : HUGE_VAL;
  e.most_expanded = Subspace(svd.matrixV().leftCols(l));
  e.unique = (s(l - 1) - s(l)) > 1e-12 * s(0);
  return e;
}

namespace {

struct VolumeTracker {
  Matrix w;
  CompensatedSum log_vol;
};

}  // namespace

double log_gap_functional(const CocycleGenerator& gen, const SkewProduct& dyn,
                          const FiberedPoint& point, std::int64_t n, const Subspace& xi_u,
                          const Subspace& eta_s) {
  const int d = gen.dim();
  require(xi_u.dim() == d && eta_s.dim() == d, ErrorKind::PreconditionViolation,
          "gap functional subspaces must live in C^d");
  const int du = xi_u.rank(), ds = eta_s.rank();
  require(du >= 1 && ds >= 1 && du + ds <= d, ErrorKind::PreconditionViolation,
          "gap functional needs d_u, d_s >= 1 and d_u + d_s <= d");
  require(n >= 0, ErrorKind::PreconditionViolation, "gap functional needs n >= 0");
  require(min_principal_angle(xi_u, eta_s) > 1e-8, ErrorKind::NonTransverse,
          "xi^u and eta^s intersect");
  Matrix wcols(d, du + ds);
  wcols << xi_u.frame(), eta_s.frame();
  VolumeTracker x{xi_u.frame(), {}};
  VolumeTracker w{wcols, {}};
  const double log_w0 = log_volume(wcols);
  FiberedPoint q = point;
  for (std::int64_t j = 0; j < n; ++j) {
    const Matrix a = gen.evaluate(q);
    q = dyn.step(q);
    for (VolumeTracker* t : {&x, &w}) {
      const QrStep qr = qr_step(a * t->w);
      for (Eigen::Index i = 0; i < qr.log_abs_diag.size(); ++i) t->log_vol.add(qr.log_abs_diag(i));
      t->w = qr.q;
    }
  }
  return x.log_vol.value() / du - (w.log_vol.value() - log_w0) / (du + ds);
}

double gap_functional(const CocycleGenerator& gen, const SkewProduct& dyn,
                      const FiberedPoint& point, std::int64_t n, const Subspace& xi_u,
                      const Subspace& eta_s) {
  return std::exp(log_gap_functional(gen, dyn, point, n, xi_u, eta_s));
}

Region cylinder_region(const Word& word, std::int64_t position) {
  return [word, position](const FiberedPoint& p) {
    for (std::size_t i = 0; i < word.size(); ++i)
      if (p.base.coordinate(position + static_cast<std::int64_t>(i)) != word[i]) return false;
    return true;
  };
}

Region whole_space() {
  return [](const FiberedPoint&) { return true; };
}

InducedCocycle induced_cocycle(const CocycleGenerator& gen, const SkewProduct& dyn,
                               const Region& region, const FiberedPoint& start,
                               std::int64_t n_max, std::size_t max_blocks, std::uint64_t seed) {
  require(n_max >= 1, ErrorKind::PreconditionViolation, "induced cocycle needs n_max >= 1");
  const int d = gen.dim();
  FiberedPoint q = start;
  std::int64_t used = 0;
  while (!region(q)) {
    q = dyn.step(q);
    if (++used >= n_max) fail(ErrorKind::NoReturns, "orbit never enters the region");
  }
  Rng rng(seed);
  Vector u = random_gaussian(d, 1, rng).col(0);
  u.normalize();
  Vector v = u;
  CompensatedSum induced_log, original_log;
  InducedCocycle out;
  Matrix block = Matrix::Identity(d, d);
  int r = 0;
  std::int64_t steps_in_blocks = 0;
  for (; used < n_max; ++used) {
    const Matrix a = gen.evaluate(q);
    block = a * block;
    v = a * v;
    const double nv = v.norm();
    original_log.add(std::log(nv));
    v /= nv;
    q = dyn.step(q);
    ++r;
    if (region(q)) {
      u = block * u;
      const double nu = u.norm();
      induced_log.add(std::log(nu));
      u /= nu;
      out.return_times.push_back(r);
      if (max_blocks == 0 || out.blocks.size() < max_blocks) out.blocks.push_back(block);
      steps_in_blocks += r;
      block = Matrix::Identity(d, d);
      r = 0;
    }
  }
  if (out.return_times.empty()) fail(ErrorKind::NoReturns, "orbit never re-enters the region");
  const double k = static_cast<double>(out.return_times.size());
  out.mean_return = static_cast<double>(steps_in_blocks) / k;
  out.induced_top = induced_log.value() / k;
  out.original_top = original_log.value() / static_cast<double>(used);
  return out;
}

InducedSummary induced_statistics(const CocycleGenerator& gen, const SkewProduct& dyn,
                                  const MeasureSpec& spec, const Region& region,
                                  std::int64_t n_max, int n_orbits, std::uint64_t seed) {
  require(n_orbits >= 1, ErrorKind::PreconditionViolation, "need at least one orbit");
  std::vector<double> ret(static_cast<std::size_t>(n_orbits)), ind(ret.size()), orig(ret.size()),
      freq(ret.size());
  parallel_for(ret.size(), [&](std::size_t i) {
    const FiberedPoint start = sample_fibered(spec, hash_pair(seed, i));
    const InducedCocycle ic = induced_cocycle(gen, dyn, region, start, n_max, 1, hash_pair(seed ^ 0xabcULL, i));
    ret[i] = ic.mean_return;
    ind[i] = ic.induced_top;
    orig[i] = ic.original_top;
    freq[i] = static_cast<double>(ic.return_times.size()) / static_cast<double>(n_max);
  });
  InducedSummary s;
  const MeanStderr r = mean_stderr(ret), a = mean_stderr(ind), b = mean_stderr(orig),
                   f = mean_stderr(freq);
  s.mean_return = r.mean;
  s.mean_return_stderr = std::hypot(r.stderr_, kStderrFloor);
  s.induced_top = a.mean;
  s.induced_stderr = std::hypot(a.stderr_, kStderrFloor);
  s.original_top = b.mean;
  s.original_stderr = std::hypot(b.stderr_, kStderrFloor);
  s.region_measure = f.mean;
  return s;
}

}  // namespace cocycle
