#include "cocycle/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cocycle/error.hpp"
#include "cocycle/random.hpp"

namespace cocycle {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

Symbol categorical(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto idx = static_cast<Symbol>(it - cumulative.begin());
  return std::min<Symbol>(idx, static_cast<Symbol>(cumulative.size()) - 1);
}

std::vector<double> cumulative_of(const std::vector<double>& weights) {
  std::vector<double> c(weights.size());
  std::partial_sum(weights.begin(), weights.end(), c.begin());
  if (!c.empty()) c.back() = 1.0;
  return c;
}

}  // namespace

Alphabet::Alphabet(int size) : size_(size) {
  require(size >= 2, ErrorKind::InvalidConfig, "alphabet needs at least two symbols");
}

BiSequence BiSequence::exact(Word left_period, Word core, Word right_period, std::int64_t anchor) {
  require(!left_period.empty() && !right_period.empty(), ErrorKind::PreconditionViolation,
          "periodic tails must be nonempty");
  auto rep = std::make_shared<const Rep>(
      Exact{std::move(left_period), std::move(core), std::move(right_period), anchor});
  return BiSequence(std::move(rep), 0);
}

BiSequence BiSequence::constant(Symbol s) { return exact({s}, {}, {s}, 0); }

BiSequence BiSequence::lazy_random(std::uint64_t seed, const std::vector<double>& weights,
                                   std::map<std::int64_t, Symbol> overrides) {
  require(!weights.empty(), ErrorKind::PreconditionViolation, "empty weight vector");
  auto rep = std::make_shared<const Rep>(LazyRandom{seed, cumulative_of(weights), std::move(overrides)});
  return BiSequence(std::move(rep), 0);
}

BiSequence BiSequence::splice(const BiSequence& past, const BiSequence& future, std::int64_t cut) {
  auto rep = std::make_shared<const Rep>(Spliced{std::make_shared<const BiSequence>(past),
                                                 std::make_shared<const BiSequence>(future), cut});
  return BiSequence(std::move(rep), 0);
}

Symbol BiSequence::coordinate(std::int64_t k) const {
  const std::int64_t j = k + offset_;
  return std::visit(
      [j](const auto& r) -> Symbol {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Exact>) {
          const auto core_len = static_cast<std::int64_t>(r.core.size());
          if (j < r.anchor)
            return r.left_period[floor_mod(j - r.anchor, static_cast<std::int64_t>(r.left_period.size()))];
          if (j < r.anchor + core_len) return r.core[j - r.anchor];
          return r.right_period[floor_mod(j - r.anchor - core_len,
                                          static_cast<std::int64_t>(r.right_period.size()))];
        } else if constexpr (std::is_same_v<T, LazyRandom>) {
          if (!r.overrides.empty()) {
            const auto it = r.overrides.find(j);
            if (it != r.overrides.end()) return it->second;
          }
          const double u = to_unit_interval(hash_pair(r.seed, static_cast<std::uint64_t>(j)));
          return categorical(r.cumulative, u);
        } else {
          return j >= r.cut ? r.future->coordinate(j) : r.past->coordinate(j);
        }
      },
      *rep_);
}

BiSequence BiSequence::shifted(std::int64_t n) const { return BiSequence(rep_, offset_ + n); }

bool BiSequence::is_exact() const { return std::holds_alternative<Exact>(*rep_); }
bool BiSequence::is_lazy() const { return std::holds_alternative<LazyRandom>(*rep_); }
bool BiSequence::is_spliced() const { return std::holds_alternative<Spliced>(*rep_); }

std::int64_t BiSequence::anchor() const {
  require(is_exact(), ErrorKind::PreconditionViolation, "anchor is defined for exact sequences only");
  return std::get<Exact>(*rep_).anchor - offset_;
}

bool BiSequence::agrees_on(const BiSequence& other, std::int64_t lo, std::int64_t hi) const {
  for (std::int64_t k = lo; k <= hi; ++k)
    if (coordinate(k) != other.coordinate(k)) return false;
  return true;
}

Word BiSequence::window(int w) const {
  Word out(2 * w + 1);
  for (int k = -w; k <= w; ++k) out[k + w] = coordinate(k);
  return out;
}

BiSequence shift(const BiSequence& x, std::int64_t n) { return x.shifted(n); }

double dist_sigma(const BiSequence& x, const BiSequence& y) {
  double d = 0.0;
  for (int k = kMetricCutoff; k >= 1; --k) {
    const double w = std::ldexp(1.0, -k);
    if (x.coordinate(k) != y.coordinate(k)) d += w;
    if (x.coordinate(-k) != y.coordinate(-k)) d += w;
  }
  if (x.coordinate(0) != y.coordinate(0)) d += 1.0;
  return d;
}

bool in_local_stable(const BiSequence& x, const BiSequence& y) {
  return x.agrees_on(y, 0, kMembershipHorizon);
}

bool in_local_unstable(const BiSequence& x, const BiSequence& y) {
  return x.agrees_on(y, -kMembershipHorizon, 0);
}

BiSequence bracket(const BiSequence& x, const BiSequence& y) {
  require(x.coordinate(0) == y.coordinate(0), ErrorKind::PreconditionViolation,
          "bracket needs x_0 == y_0 (distance <= 1/2)");
  return BiSequence::splice(y, x, 0);
}

BiSequence make_fixed_point(Symbol s) { return BiSequence::constant(s); }

Homoclinic make_homoclinic(const Word& core, Symbol s) {
  require(!core.empty(), ErrorKind::EmptyCore, "homoclinic excursion word is empty");
  return {BiSequence::exact({s}, core, {s}, 1), static_cast<int>(core.size()) + 1};
}

MeasureSpec MeasureSpec::bernoulli(std::vector<double> weights) {
  MeasureSpec spec;
  spec.bernoulli_weights = std::move(weights);
  return spec;
}

void MeasureSpec::validate() const {
  require(bernoulli_weights.size() >= 2, ErrorKind::InvalidConfig,
          "alphabet needs at least two symbols");
  double total = 0.0;
  for (double w : bernoulli_weights) {
    require(w >= 0.0 && std::isfinite(w), ErrorKind::InvalidConfig, "negative symbol weight");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorKind::InvalidConfig,
          "symbol weights must sum to 1 (got " + std::to_string(total) + ")");
  if (const auto* grid = std::get_if<DensityGrid>(&fiber_measure)) {
    require(!grid->values.empty(), ErrorKind::InvalidConfig, "empty fiber density grid");
    for (double v : grid->values)
      require(v >= 0.0 && std::isfinite(v), ErrorKind::InvalidConfig, "negative fiber density");
  }
  require(kappa_bound >= 1.0, ErrorKind::InvalidConfig, "kappa bound must be >= 1");
}

BiSequence sample_point(const MeasureSpec& spec, std::uint64_t seed) {
  return BiSequence::lazy_random(seed, spec.bernoulli_weights);
}

namespace {

double sample_from_grid(const DensityGrid& grid, Rng& rng) {
  const auto n = grid.values.size();
  const double total = std::accumulate(grid.values.begin(), grid.values.end(), 0.0);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < n; ++i) {
    if (u < grid.values[i] || i + 1 == n) {
      const double frac = grid.values[i] > 0.0 ? std::clamp(u / grid.values[i], 0.0, 1.0) : 0.5;
      return (static_cast<double>(i) + frac) / static_cast<double>(n);
    }
    u -= grid.values[i];
  }
  return 0.0;
}

}  // namespace

double sample_fiber(const MeasureSpec& spec, std::uint64_t seed, const BiSequence* base) {
  Rng rng(hash_pair(seed, 0x5eedf1be7ULL));
  for (int attempt = 0; attempt < 100000; ++attempt) {
    double t = std::visit(
        [&rng](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, LebesgueCircle>) return rng.uniform();
          else return sample_from_grid(m, rng);
        },
        spec.fiber_measure);
    if (!spec.density || base == nullptr) return t;
    const double rho = spec.density(*base, t);
    if (rng.uniform() * spec.kappa_bound <= rho) return t;
  }
  fail(ErrorKind::PreconditionViolation, "density rejection sampling did not accept");
}

}  // namespace cocycle
