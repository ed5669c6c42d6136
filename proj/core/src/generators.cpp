#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cocycle/error.hpp"
#include "cocycle/lincocycle.hpp"

namespace cocycle {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

struct WeightPair {
  double x, y, diff;
};

// psi(x), psi(y) and psi(x) - psi(y). The distance difference is summed over
// the coordinates where x and y disagree only, so it keeps full relative
// precision when the two points are close.
WeightPair bump_weight_pair(const BiSequence& x, const BiSequence& y, const BiSequence& center,
                            double radius, double exponent) {
  double dx = 0.0, dy = 0.0, dd = 0.0;
  for (int k = -kMetricCutoff; k <= kMetricCutoff; ++k) {
    const double w = std::ldexp(1.0, -std::abs(k));
    const bool mx = x.coordinate(k) != center.coordinate(k);
    const bool my = y.coordinate(k) != center.coordinate(k);
    if (mx) dx += w;
    if (my) dy += w;
    if (mx != my) dd += mx ? w : -w;
  }
  const double ux = 1.0 - dx / radius, uy = 1.0 - dy / radius;
  const double px = ux > 0.0 ? std::pow(ux, exponent) : 0.0;
  const double py = uy > 0.0 ? std::pow(uy, exponent) : 0.0;
  if (ux <= 0.0 || uy <= 0.0) return {px, py, px - py};
  const double du = -dd / radius;
  const double diff = exponent == 1.0 ? du : py * std::expm1(exponent * std::log1p(du / uy));
  return {px, py, diff};
}

class ConstantImpl final : public GeneratorImpl {
 public:
  explicit ConstantImpl(Matrix a) : a_(std::move(a)) {}
  int dim() const override { return static_cast<int>(a_.rows()); }
  int window() const override { return 0; }
  Matrix evaluate(const BiSequence&, double) const override { return a_; }
  std::string kind_name() const override { return "constant"; }
  std::optional<Matrix> constant_value() const override { return a_; }
  std::optional<std::vector<Complex>> constant_diagonal() const override {
    if (!a_.isDiagonal(0.0)) return std::nullopt;
    std::vector<Complex> d(static_cast<std::size_t>(a_.rows()));
    for (Eigen::Index i = 0; i < a_.rows(); ++i) d[static_cast<std::size_t>(i)] = a_(i, i);
    return d;
  }

 private:
  Matrix a_;
};

class DiagonalImpl final : public GeneratorImpl {
 public:
  explicit DiagonalImpl(std::vector<Complex> tau) : tau_(std::move(tau)) {
    a_ = Matrix::Zero(static_cast<Eigen::Index>(tau_.size()), static_cast<Eigen::Index>(tau_.size()));
    for (std::size_t i = 0; i < tau_.size(); ++i) a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = tau_[i];
  }
  int dim() const override { return static_cast<int>(tau_.size()); }
  int window() const override { return 0; }
  Matrix evaluate(const BiSequence&, double) const override { return a_; }
  std::string kind_name() const override { return "diagonal_constant"; }
  std::optional<Matrix> constant_value() const override { return a_; }
  std::optional<std::vector<Complex>> constant_diagonal() const override { return tau_; }

 private:
  std::vector<Complex> tau_;
  Matrix a_;
};

class BumpImpl final : public GeneratorImpl {
 public:
  explicit BumpImpl(BumpSpec spec) : spec_(std::move(spec)) {}
  int dim() const override { return static_cast<int>(spec_.base.rows()); }
  int window() const override { return kMetricCutoff; }
  double holder_alpha() const override { return std::min(1.0, spec_.exponent); }
  Matrix evaluate(const BiSequence& x, double t) const override {
    const double psi = bump_weight(x, spec_.center, spec_.radius, spec_.exponent);
    if (psi == 0.0) return spec_.base;
    Matrix r = spec_.r;
    if (spec_.r_sin.size() != 0) r += std::sin(kTwoPi * t) * spec_.r_sin;
    return spec_.base * (Matrix::Identity(dim(), dim()) + psi * r);
  }
  Matrix difference(const BiSequence& x, double s, const BiSequence& y, double t) const override {
    const auto [psi_x, psi_y, dpsi] = bump_weight_pair(x, y, spec_.center, spec_.radius, spec_.exponent);
    Matrix m = dpsi * spec_.r;
    if (spec_.r_sin.size() != 0) {
      // psi_x sin(2 pi s) - psi_y sin(2 pi t), with the sine difference in product form
      double h = s - t;
      h -= std::round(h);
      const double dsin = 2.0 * std::cos(kPi * (s + t)) * std::sin(kPi * h);
      m += (dpsi * std::sin(kTwoPi * s) + psi_y * dsin) * spec_.r_sin;
    }
    return spec_.base * m;
  }
  std::string kind_name() const override { return "bump_perturbed"; }
  const BumpSpec& spec() const { return spec_; }

 private:
  BumpSpec spec_;
};

class TableImpl final : public GeneratorImpl {
 public:
  explicit TableImpl(TableSpec spec) : spec_(std::move(spec)) {}
  int dim() const override { return spec_.dim; }
  int window() const override {
    return std::max(spec_.window, spec_.base ? spec_.base->window() : 0);
  }
  double holder_alpha() const override {
    return spec_.base ? std::min(1.0, spec_.base->holder_alpha()) : 1.0;
  }
  Matrix evaluate(const BiSequence& x, double t) const override {
    std::size_t word = 0;
    for (int k = -spec_.window; k <= spec_.window; ++k)
      word = word * static_cast<std::size_t>(spec_.alphabet_size) +
             static_cast<std::size_t>(x.coordinate(k));
    const double u = wrap_circle(t) * spec_.grid;
    const int cell = std::min(static_cast<int>(std::floor(u)), spec_.grid - 1);
    const double frac = u - cell;
    const double s = 0.5 * (1.0 - std::cos(std::numbers::pi * frac));
    const std::size_t g = static_cast<std::size_t>(spec_.grid);
    const Matrix& lo = spec_.values[word * g + static_cast<std::size_t>(cell)];
    const Matrix& hi = spec_.values[word * g + static_cast<std::size_t>((cell + 1) % spec_.grid)];
    Matrix m = (1.0 - s) * lo + s * hi;
    if (spec_.base) m += spec_.base->evaluate(x, t);
    require(condition_number(m) <= 1e12, ErrorKind::SingularValue,
            "table-driven cocycle value is numerically singular");
    return m;
  }
  std::string kind_name() const override { return "table_driven"; }
  const TableSpec& spec() const { return spec_; }

 private:
  TableSpec spec_;
};

class ExteriorImpl final : public GeneratorImpl {
 public:
  ExteriorImpl(CocycleGenerator inner, int l) : inner_(std::move(inner)), l_(l) {}
  int dim() const override { return static_cast<int>(binomial(inner_.dim(), l_)); }
  int window() const override { return inner_.window(); }
  double holder_alpha() const override { return inner_.holder_alpha(); }
  Matrix evaluate(const BiSequence& x, double t) const override {
    return compound_matrix(inner_.evaluate(x, t), l_);
  }
  Matrix difference(const BiSequence& x, double s, const BiSequence& y, double t) const override {
    return compound_difference(inner_.evaluate(y, t), inner_.difference(x, s, y, t), l_);
  }
  std::string kind_name() const override { return "exterior_power"; }
  std::optional<Matrix> constant_value() const override {
    if (auto a = inner_.constant_value()) return compound_matrix(*a, l_);
    return std::nullopt;
  }
  std::optional<std::vector<Complex>> constant_diagonal() const override {
    auto tau = inner_.constant_diagonal();
    if (!tau) return std::nullopt;
    std::vector<Complex> out;
    for (const auto& idx : combinations(inner_.dim(), l_)) {
      Complex p = 1.0;
      for (int i : idx) p *= (*tau)[static_cast<std::size_t>(i)];
      out.push_back(p);
    }
    return out;
  }

 private:
  CocycleGenerator inner_;
  int l_;
};

class AdjointImpl final : public GeneratorImpl {
 public:
  AdjointImpl(CocycleGenerator inner, SkewProduct dyn) : inner_(std::move(inner)), dyn_(std::move(dyn)) {}
  int dim() const override { return inner_.dim(); }
  int window() const override {
    return std::max(inner_.window() + 1, dyn_.family().window() + 1);
  }
  double holder_alpha() const override { return inner_.holder_alpha(); }
  Matrix evaluate(const BiSequence& x, double t) const override {
    const FiberedPoint prev = dyn_.step_back({x, t});
    return inner_.evaluate(prev).adjoint();
  }
  Matrix difference(const BiSequence& x, double s, const BiSequence& y, double t) const override {
    return inner_.difference(dyn_.step_back({x, s}), dyn_.step_back({y, t})).adjoint();
  }
  std::string kind_name() const override { return "adjoint"; }
  std::optional<Matrix> constant_value() const override {
    if (auto a = inner_.constant_value()) return Matrix(a->adjoint());
    return std::nullopt;
  }
  std::optional<std::vector<Complex>> constant_diagonal() const override {
    auto tau = inner_.constant_diagonal();
    if (!tau) return std::nullopt;
    for (auto& v : *tau) v = std::conj(v);
    return tau;
  }

 private:
  CocycleGenerator inner_;
  SkewProduct dyn_;
};

void require_square(const Matrix& a, const char* what) {
  require(a.rows() > 0 && a.rows() == a.cols(), ErrorKind::InvalidConfig,
          std::string(what) + " must be a nonempty square matrix");
}

}  // namespace

CocycleGenerator::CocycleGenerator(std::shared_ptr<const GeneratorImpl> impl, Kind kind)
    : impl_(std::move(impl)), kind_(kind) {
  require(impl_ != nullptr, ErrorKind::PreconditionViolation, "null generator backend");
}

CocycleGenerator CocycleGenerator::constant(const Matrix& a) {
  require_square(a, "constant cocycle");
  require(condition_number(a) <= 1e12, ErrorKind::SingularValue, "constant cocycle is singular");
  return CocycleGenerator(std::make_shared<ConstantImpl>(a), Kind::Constant);
}

CocycleGenerator CocycleGenerator::diagonal_constant(const std::vector<Complex>& tau) {
  require(!tau.empty(), ErrorKind::InvalidConfig, "diagonal cocycle needs at least one entry");
  for (const auto& v : tau)
    require(std::abs(v) > 0.0, ErrorKind::SingularValue, "diagonal entry is zero");
  return CocycleGenerator(std::make_shared<DiagonalImpl>(tau), Kind::DiagonalConstant);
}

CocycleGenerator CocycleGenerator::bump_perturbed(const BumpSpec& spec) {
  require_square(spec.base, "bump base");
  require(spec.r.rows() == spec.base.rows() && spec.r.cols() == spec.base.cols(),
          ErrorKind::InvalidConfig, "bump perturbation R must match the base dimension");
  require(spec.r_sin.size() == 0 ||
              (spec.r_sin.rows() == spec.base.rows() && spec.r_sin.cols() == spec.base.cols()),
          ErrorKind::InvalidConfig, "R_sin must match the base dimension");
  require(spec.radius > 0.0, ErrorKind::InvalidConfig, "bump radius must be positive");
  require(spec.exponent > 0.0, ErrorKind::InvalidConfig, "bump exponent must be positive");
  return CocycleGenerator(std::make_shared<BumpImpl>(spec), Kind::BumpPerturbed);
}

CocycleGenerator CocycleGenerator::table_driven(const TableSpec& spec) {
  require(spec.dim >= 1 && spec.grid >= 1 && spec.window >= 0 && spec.alphabet_size >= 2,
          ErrorKind::InvalidConfig, "malformed table-driven cocycle");
  std::size_t words = 1;
  for (int i = 0; i < 2 * spec.window + 1; ++i) words *= static_cast<std::size_t>(spec.alphabet_size);
  require(spec.values.size() == words * static_cast<std::size_t>(spec.grid),
          ErrorKind::InvalidConfig, "table needs one matrix per (window word, grid cell)");
  for (const auto& m : spec.values)
    require(m.rows() == spec.dim && m.cols() == spec.dim, ErrorKind::InvalidConfig,
            "table entry has the wrong dimension");
  if (spec.base)
    require(spec.base->dim() == spec.dim, ErrorKind::InvalidConfig,
            "table base generator has the wrong dimension");
  return CocycleGenerator(std::make_shared<TableImpl>(spec), Kind::TableDriven);
}

double bump_weight(const BiSequence& x, const BiSequence& center, double radius, double exponent) {
  // Accumulate the metric from the centre outwards and stop as soon as the
  // point is known to lie outside the ball.
  double d = x.coordinate(0) != center.coordinate(0) ? 1.0 : 0.0;
  if (d >= radius) return 0.0;
  double w = 1.0;
  for (int k = 1; k <= kMetricCutoff; ++k) {
    w *= 0.5;
    if (x.coordinate(k) != center.coordinate(k)) d += w;
    if (x.coordinate(-k) != center.coordinate(-k)) d += w;
    if (d >= radius) return 0.0;
  }
  return std::pow(1.0 - d / radius, exponent);
}

CocycleGenerator exterior_power(const CocycleGenerator& gen, int l) {
  require(l >= 1 && l <= gen.dim(), ErrorKind::PreconditionViolation,
          "exterior power needs 1 <= l <= d");
  return CocycleGenerator(std::make_shared<ExteriorImpl>(gen, l),
                          CocycleGenerator::Kind::ExteriorPower);
}

CocycleGenerator adjoint_cocycle(const CocycleGenerator& gen, const SkewProduct& dyn) {
  return CocycleGenerator(std::make_shared<AdjointImpl>(gen, dyn), CocycleGenerator::Kind::Adjoint);
}

}  // namespace cocycle
