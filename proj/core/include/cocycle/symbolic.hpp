#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace cocycle {

using Symbol = int;
using Word = std::vector<Symbol>;

/// Symbols 0..size-1 of a finite alphabet (size >= 2).
class Alphabet {
 public:
  explicit Alphabet(int size);
  int size() const { return size_; }
  bool contains(Symbol s) const { return s >= 0 && s < size_; }

 private:
  int size_;
};

/// Number of metric terms kept on each side of index 0.
inline constexpr int kMetricCutoff = 64;

/// Hyperbolicity constants of the full shift for the 2^{-|k|} metric.
inline constexpr double kLambda = 0.5;
inline constexpr double kTau = 0.5;

/// A point of the two-sided full shift. Immutable; copies share state.
///
/// Three representations: eventually periodic words (exact), lazily sampled
/// Bernoulli sequences (coordinate k is a hash of (seed, k)), and splices
/// that take the past of one sequence and the future of another.
class BiSequence {
 public:
  struct Exact {
    Word left_period;
    Word core;
    Word right_period;
    std::int64_t anchor = 0;
  };
  struct LazyRandom {
    std::uint64_t seed = 0;
    std::vector<double> cumulative;  // CDF of the symbol weights
    std::map<std::int64_t, Symbol> overrides;
  };
  struct Spliced {
    std::shared_ptr<const BiSequence> past;
    std::shared_ptr<const BiSequence> future;
    std::int64_t cut = 0;  // coordinates >= cut come from `future`
  };
  using Rep = std::variant<Exact, LazyRandom, Spliced>;

  static BiSequence exact(Word left_period, Word core, Word right_period, std::int64_t anchor = 0);
  static BiSequence constant(Symbol s);
  static BiSequence lazy_random(std::uint64_t seed, const std::vector<double>& weights,
                                std::map<std::int64_t, Symbol> overrides = {});
  /// Coordinates k >= cut from `future`, k < cut from `past`.
  static BiSequence splice(const BiSequence& past, const BiSequence& future, std::int64_t cut);

  Symbol coordinate(std::int64_t k) const;
  Symbol operator[](std::int64_t k) const { return coordinate(k); }

  /// sigma^n: coordinate(k) of the result is coordinate(k + n) of this.
  BiSequence shifted(std::int64_t n) const;

  bool is_exact() const;
  bool is_lazy() const;
  bool is_spliced() const;

  /// Index of the start of the core word (Exact only).
  std::int64_t anchor() const;
  const Rep& rep() const { return *rep_; }

  /// Same coordinates on [lo, hi].
  bool agrees_on(const BiSequence& other, std::int64_t lo, std::int64_t hi) const;

  /// Symbols x_{-w..w}.
  Word window(int w) const;

 private:
  BiSequence(std::shared_ptr<const Rep> rep, std::int64_t offset)
      : rep_(std::move(rep)), offset_(offset) {}

  std::shared_ptr<const Rep> rep_;
  std::int64_t offset_ = 0;
};

/// Shift map: returns sigma^n(x).
BiSequence shift(const BiSequence& x, std::int64_t n);

/// sum_{|k| <= 64} 2^{-|k|} [x_k != y_k].
double dist_sigma(const BiSequence& x, const BiSequence& y);

/// Coordinates agree for 0 <= k <= horizon (resp. -horizon <= k <= 0).
inline constexpr std::int64_t kMembershipHorizon = 128;
bool in_local_stable(const BiSequence& x, const BiSequence& y);
bool in_local_unstable(const BiSequence& x, const BiSequence& y);

/// The point of W^s_loc(x) ∩ W^u_loc(y): future of x, past of y.
/// Throws PreconditionViolation when x_0 != y_0.
BiSequence bracket(const BiSequence& x, const BiSequence& y);

BiSequence make_fixed_point(Symbol s);

struct Homoclinic {
  BiSequence point;
  int return_time;  // sigma^{return_time}(point) lies in W^s_loc(p)
};

/// Homoclinic point of the fixed point s: the excursion word sits at indices
/// 1..|core| so that z_k = s for k <= 0 and for k >= |core|+1; the return
/// time is |core|+1. Throws EmptyCore.
Homoclinic make_homoclinic(const Word& core, Symbol s);

/// Invariant probability on the fiber circle.
struct LebesgueCircle {};
struct DensityGrid {
  std::vector<double> values;  // density on a uniform grid of [0,1)
};
using FiberMeasure = std::variant<LebesgueCircle, DensityGrid>;

/// Base measure mu^s x mu^u (a Bernoulli product), fiber measure mu^c and an
/// optional bounded density rho with declared bound kappa.
struct MeasureSpec {
  std::vector<double> bernoulli_weights;
  FiberMeasure fiber_measure = LebesgueCircle{};
  std::function<double(const BiSequence&, double)> density;
  double kappa_bound = 1.0;

  static MeasureSpec bernoulli(std::vector<double> weights);

  int alphabet_size() const { return static_cast<int>(bernoulli_weights.size()); }

  /// Throws InvalidConfig when weights do not form a probability vector.
  void validate() const;
};

/// A mu^s x mu^u distributed point; identical seeds give identical points.
BiSequence sample_point(const MeasureSpec& spec, std::uint64_t seed);

/// A mu^c distributed fiber coordinate in [0,1) (density-weighted by
/// rejection against kappa when spec.density is set, in which case the base
/// point is needed).
double sample_fiber(const MeasureSpec& spec, std::uint64_t seed,
                    const BiSequence* base = nullptr);

}  // namespace cocycle
