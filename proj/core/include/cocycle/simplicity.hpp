#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cocycle/lincocycle.hpp"
#include "cocycle/spectrum.hpp"

namespace cocycle {

struct PinchingReport {
  std::vector<double> exponents;          // restriction to the fiber of p, descending
  std::vector<double> min_gap;            // index k-1: smallest gap among k-subset sums
  std::vector<std::vector<double>> per_sample;
  double tol = 5e-3;
  bool pass = false;
};

/// Pinching on the periodic fiber {p} x K: every exterior power has simple
/// spectrum, i.e. all k-subset sums of exponents are pairwise distinct.
PinchingReport check_pinching(const CocycleGenerator& gen, const SkewProduct& dyn,
                              const BiSequence& p, const std::vector<double>& t_samples,
                              std::int64_t n, double tol = 5e-3, std::uint64_t seed = 7);

struct UniformPinchingReport {
  /// margins[k-1][i]: min over the grid of sigma_i / sigma_{i+1} of the k-th
  /// compound of A^N along the fiber orbit.
  std::vector<std::vector<double>> margins;
  double min_margin = HUGE_VAL;
  double tol_dom = 1e-3;
  int n = 0;
  bool pass = false;
};

UniformPinchingReport check_uniform_pinching(const CocycleGenerator& gen, const SkewProduct& dyn,
                                             const BiSequence& p,
                                             const std::vector<double>& t_grid, int n,
                                             double tol_dom = 1e-3);

/// Homoclinic data expressed for `dyn`: over reversed dynamics the roles of
/// the local stable and unstable sets swap, so the excursion starts at
/// sigma^i(z).
Homoclinic homoclinic_for(const SkewProduct& dyn, const Homoclinic& h);

/// B(t): row i holds the coordinates of V^i(t) in the Oseledets basis e^j(t),
/// where V^i = H^u_{z,p} A^{-i}(sigma^i z) H^s_{p, sigma^i z} E^i transports
/// the Oseledets lines around the homoclinic loop. Rows are scaled so that
/// ||V^i|| = 1.
Matrix twisting_matrix(const CocycleGenerator& gen, const SkewProduct& dyn, const BiSequence& p,
                       const Homoclinic& z, double t, int n_oseledets = 200, double tol = 1e-10);

struct TwistingOptions {
  int n_oseledets = 200;
  double tol_slope = 1e-2;
  double tol_margin = 1e-6;
  double zero_threshold = 1e-8;
  int max_points = 64;  // orbit points evaluated per sample, evenly spaced
  int threads = 0;
};

struct MinorTrace {
  std::vector<int> rows;
  std::vector<int> cols;
  double min_abs = HUGE_VAL;
  double max_abs = 0.0;
  double slope = 0.0;  // worst (largest |.|) regression slope of log|m| against n
  bool zero = false;
};

struct TwistingReport {
  std::vector<MinorTrace> minors;
  double min_minor = HUGE_VAL;
  double max_abs_slope = 0.0;
  std::vector<bool> sample_uniform;
  std::vector<bool> sample_nonuniform;
  double tol_slope = 1e-2;
  double tol_margin = 1e-6;
  bool uniform_pass = false;
  bool nonuniform_pass = false;
};

TwistingReport check_twisting(const CocycleGenerator& gen, const SkewProduct& dyn,
                              const BiSequence& p, const Homoclinic& z,
                              const std::vector<double>& t_samples, std::int64_t orbit_len,
                              const TwistingOptions& opts = {});

struct SimplicityReport {
  PinchingReport pinching;
  TwistingReport twisting;
  std::optional<UniformPinchingReport> uniform_pinching;
  bool overall = false;          // pinching and twisting
  bool uniform_overall = false;  // uniform pinching and uniform twisting
};

struct SimplicityConfig {
  std::vector<double> t_samples{0.1, 0.35, 0.6, 0.85};
  std::int64_t pinching_steps = 20000;
  double pinching_tol = 5e-3;
  std::int64_t orbit_len = 10000;
  int uniform_n = 10;
  double tol_dom = 1e-3;
  TwistingOptions twisting;
};

SimplicityReport check_simplicity(const CocycleGenerator& gen, const SkewProduct& dyn,
                                  const BiSequence& p, const Homoclinic& z,
                                  const SimplicityConfig& cfg = {});

struct TheoremCCertificate {
  int d = 0;
  int relation_bound = 6;
  double min_relation = HUGE_VAL;  // min over relations of max(|sum m log|tau||, arg defect)
  double min_minor = 0.0;          // smallest |minor| of id + R
  double tol_margin = 1e-6;
  double radius = 0.0;
  double bunching_ratio = 0.0;     // max|tau| / min|tau|
  bool fiber_bunched = false;      // ratio < 1 / lambda
  bool ok = false;
};

struct TheoremCExample {
  CocycleGenerator gen;
  TheoremCCertificate certificate;
  BiSequence p;
  Homoclinic z;
};

/// The constant-plus-bump cocycle A (id + psi R) with A = diag(tau), bump
/// centred at the homoclinic point of the fixed point `s` with excursion
/// `core`. Throws ResonantEigenvalues, MinorVanishes or BumpOverlap.
TheoremCExample theoremC_example(const std::vector<Complex>& tau, const Matrix& r, double radius,
                                 const Word& core, Symbol s = 0, double tol_margin = 1e-6,
                                 int relation_bound = 6, double relation_tol = 1e-9);

/// True when sigma^j(B(z, r)) meets B(z, r).
bool bump_overlaps_shift(const BiSequence& z, double radius, int j);

struct OpennessOptions {
  std::vector<double> t_grid{0.05, 0.3, 0.55, 0.8};
  int uniform_n = 10;
  double tol_dom = 1e-3;
  std::vector<double> t_samples{0.15, 0.65};
  std::int64_t orbit_len = 40;
  TwistingOptions twisting{200, 1e-2, 1e-6, 1e-8, 8, 0};
  int noise_window = 1;
  int noise_grid = 4;
  int threads = 0;
};

struct OpennessReport {
  int trials = 0;
  int preserved = 0;
  double fraction = 0.0;
  bool baseline = false;
  std::vector<bool> per_trial;
  std::vector<double> noise_norm;  // analytic Hölder-norm bound of each perturbation
};

/// Table-driven noise of Hölder norm at most `delta` for the given alphabet.
CocycleGenerator holder_noise(const CocycleGenerator& base, int alphabet_size, double delta,
                              std::uint64_t seed, int window = 1, int grid = 4,
                              double* norm_bound = nullptr);

OpennessReport openness_probe(const CocycleGenerator& gen, const SkewProduct& dyn,
                              const BiSequence& p, const Homoclinic& z, double delta, int trials,
                              std::uint64_t seed, const OpennessOptions& opts = {});

}  // namespace cocycle
