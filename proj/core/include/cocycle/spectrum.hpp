#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cocycle/lincocycle.hpp"
#include "cocycle/subspace.hpp"

namespace cocycle {

struct SpectrumEstimate {
  std::vector<double> exponents;  // descending, nats per iterate
  std::vector<double> stderr_;    // per exponent, pooled over orbits
  std::int64_t n_steps = 0;
  int n_orbits = 0;
  bool exact = false;  // closed-form diagonal path
  std::vector<std::vector<double>> per_orbit;
};

struct SpectrumOptions {
  int k_renorm = 5;
  std::int64_t burn_in = -1;  // -1: min(n_steps / 10, 1000)
  bool allow_exact = true;
  int threads = 0;
};

/// Floor added in quadrature to every reported standard error; accounts for
/// rounding in the accumulated logarithms when orbits agree to the last bit.
inline constexpr double kStderrFloor = 1e-12;

/// QR (Benettin) estimator pooled over mu-typical orbits.
SpectrumEstimate lyapunov_spectrum(const CocycleGenerator& gen, const SkewProduct& dyn,
                                   const MeasureSpec& spec, std::int64_t n_steps, int n_orbits,
                                   std::uint64_t seed, const SpectrumOptions& opts = {});

/// Same estimator started from given points (e.g. along a periodic fiber).
SpectrumEstimate orbit_spectrum(const CocycleGenerator& gen, const SkewProduct& dyn,
                                const std::vector<FiberedPoint>& starts, std::int64_t n_steps,
                                std::uint64_t seed, const SpectrumOptions& opts = {});

struct OseledetsSplit {
  FiberedPoint point;
  std::vector<Subspace> lines;    // E^1 .. E^d, fastest first
  std::vector<double> exponents;  // growth rates seen along the forward pass
  Matrix frame;                   // unit representatives of the lines as columns
  double min_angle = 0.0;         // smallest angle between a line and the span of the others
  double defect = -1.0;           // invariance residual (radians); -1 when not computed
  bool converged = true;          // exp(-n * min gap) < tol
};

/// Minimal exponent separation treated as distinct.
inline constexpr double kExponentResolution = 5e-3;

/// Oseledets lines at `point` as intersections of the forward flag (generic
/// frame pushed by A^n from f^{-n}) and the backward flag (pushed by A^{-n}
/// from f^n). Throws DegenerateSplit when two exponents are closer than the
/// resolution or an intersection is ill-conditioned.
OseledetsSplit oseledets_split(const CocycleGenerator& gen, const SkewProduct& dyn,
                               const FiberedPoint& point, int n, double tol = 1e-10,
                               bool compute_defect = false, std::uint64_t seed = 0x05e1ede75ULL);

/// Split on the fiber of a fixed point p of the shift.
OseledetsSplit oseledets_split_on_fiber(const CocycleGenerator& gen, const SkewProduct& dyn,
                                        const BiSequence& p, double t, int n, double tol = 1e-10,
                                        bool compute_defect = false);

struct Eccentricity {
  double value = 1.0;  // sigma_l / sigma_{l+1}
  Subspace most_expanded;
  bool unique = false;
};

Eccentricity eccentricity(const Matrix& l_mat, int l);

/// log of the gap functional Delta^n at `point`.
double log_gap_functional(const CocycleGenerator& gen, const SkewProduct& dyn,
                          const FiberedPoint& point, std::int64_t n, const Subspace& xi_u,
                          const Subspace& eta_s);

/// Delta^n itself (overflows to +inf for long orbits; prefer the log).
double gap_functional(const CocycleGenerator& gen, const SkewProduct& dyn,
                      const FiberedPoint& point, std::int64_t n, const Subspace& xi_u,
                      const Subspace& eta_s);

using Region = std::function<bool(const FiberedPoint&)>;

/// Points whose base reads `word` starting at index `position`.
Region cylinder_region(const Word& word, std::int64_t position = 0);
Region whole_space();

struct InducedCocycle {
  std::vector<int> return_times;
  std::vector<Matrix> blocks;  // D = A^r at each visit (capped by max_blocks)
  double mean_return = 0.0;
  double induced_top = 0.0;   // top exponent per return
  double original_top = 0.0;  // top exponent per iterate along the same orbit
};

/// First-return cocycle along the orbit of `start`, followed for n_max
/// iterates. Throws NoReturns when the region is not visited twice.
InducedCocycle induced_cocycle(const CocycleGenerator& gen, const SkewProduct& dyn,
                               const Region& region, const FiberedPoint& start,
                               std::int64_t n_max, std::size_t max_blocks = 0,
                               std::uint64_t seed = 0x1dcedULL);

struct InducedSummary {
  double mean_return = 0.0;
  double mean_return_stderr = 0.0;
  double induced_top = 0.0;
  double induced_stderr = 0.0;
  double original_top = 0.0;
  double original_stderr = 0.0;
  double region_measure = 0.0;  // empirical visit frequency
};

InducedSummary induced_statistics(const CocycleGenerator& gen, const SkewProduct& dyn,
                                  const MeasureSpec& spec, const Region& region,
                                  std::int64_t n_max, int n_orbits, std::uint64_t seed);

}  // namespace cocycle
