#include "cocycle/ustates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cocycle/error.hpp"
#include "cocycle/parallel.hpp"
#include "cocycle/random.hpp"
#include "cocycle/spectrum.hpp"

namespace cocycle {

AtomicGrassMeasure::AtomicGrassMeasure(std::vector<Subspace> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  require(!atoms_.empty() && atoms_.size() == weights_.size(), ErrorKind::PreconditionViolation,
          "atomic measure needs one weight per atom");
  for (const auto& a : atoms_)
    require(a.rank() == atoms_.front().rank() && a.dim() == atoms_.front().dim(),
            ErrorKind::RankMismatch, "atoms of a Grassmannian measure must share rank");
  for (double w : weights_) require(w > 0.0, ErrorKind::PreconditionViolation, "weights must be positive");
  require(std::abs(total_mass() - 1.0) <= 1e-12, ErrorKind::PreconditionViolation,
          "weights must sum to 1");
}

AtomicGrassMeasure AtomicGrassMeasure::uniform(std::vector<Subspace> atoms) {
  const std::size_t n = atoms.size();
  return AtomicGrassMeasure(std::move(atoms), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

AtomicGrassMeasure AtomicGrassMeasure::random(int d, int l, int count, std::uint64_t seed) {
  require(count >= 1 && l >= 1 && l <= d, ErrorKind::PreconditionViolation,
          "random measure needs count >= 1 and 1 <= l <= d");
  Rng rng(seed);
  std::vector<Subspace> atoms;
  for (int i = 0; i < count; ++i) atoms.emplace_back(random_gaussian(d, l, rng));
  return uniform(std::move(atoms));
}

double AtomicGrassMeasure::total_mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double AtomicGrassMeasure::diameter() const {
  double diam = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < atoms_.size(); ++j)
      diam = std::max(diam, grass_distance(atoms_[i], atoms_[j]));
  return diam;
}

AtomicGrassMeasure pushforward(const AtomicGrassMeasure& m, const Matrix& l_mat) {
  require(l_mat.rows() == m.dim() && l_mat.cols() == m.dim(), ErrorKind::PreconditionViolation,
          "push-forward matrix has the wrong dimension");
  require(condition_number(l_mat) <= 1e12, ErrorKind::SingularValue,
          "push-forward matrix is numerically singular");
  std::vector<Subspace> atoms;
  atoms.reserve(m.size());
  for (const auto& a : m.atoms()) atoms.push_back(a.image(l_mat));
  return AtomicGrassMeasure(std::move(atoms), m.weights());
}

std::vector<PushforwardStep> backward_pushforward_experiment(
    const CocycleGenerator& gen, const SkewProduct& dyn, const FiberedPoint& point,
    const AtomicGrassMeasure& m0, const std::vector<std::int64_t>& n_list, int threads) {
  require(gen.dim() == m0.dim(), ErrorKind::PreconditionViolation,
          "measure and cocycle dimensions differ");
  std::vector<PushforwardStep> out(n_list.size(), PushforwardStep{0, m0, 0.0});
  parallel_for(
      n_list.size(),
      [&](std::size_t idx) {
        const std::int64_t n = n_list[idx];
        require(n >= 0, ErrorKind::PreconditionViolation, "n_list entries must be >= 0");
        std::vector<Matrix> frames;
        for (const auto& a : m0.atoms()) frames.push_back(a.frame());
        FiberedPoint q = dyn.iterate(point, -n);
        for (std::int64_t k = 0; k < n; ++k) {
          const Matrix a = gen.evaluate(q);
          for (auto& f : frames) f = orthonormalize(a * f);
          q = dyn.step(q);
        }
        std::vector<Subspace> atoms;
        for (const auto& f : frames) atoms.emplace_back(f);
        AtomicGrassMeasure m(std::move(atoms), m0.weights());
        const double diam = m.diameter();
        out[idx] = PushforwardStep{n, std::move(m), diam};
      },
      threads);
  return out;
}

namespace {

// A fixed generic frame pushed along the orbit from f^{-n}(point) with a QR
// step per iterate. Its first l columns span the image of a generic
// l-subspace, which converges to the image of the most expanded one at the
// rate set by the eccentricity; log|R_ii| accumulate the singular value growth.
// An explicit product A^n would lose every singular value below eps * sigma_1.
Subspace xi_at(const CocycleGenerator& gen, const SkewProduct& dyn, const FiberedPoint& point,
               int l, std::int64_t n, double tol) {
  const int d = gen.dim();
  require(l >= 1 && l <= d - 1, ErrorKind::PreconditionViolation, "section_xi needs 1 <= l <= d-1");
  Rng rng(0x5ec7105eedULL);
  Matrix q = random_unitary(d, rng);
  RealVector growth = RealVector::Zero(d);
  FiberedPoint x = dyn.iterate(point, -n);
  for (std::int64_t k = 0; k < n; ++k) {
    const QrStep st = qr_step(gen.evaluate(x) * q);
    q = st.q;
    growth += st.log_abs_diag;
    x = dyn.step(x);
  }
  require(growth(l - 1) - growth(l) > std::log(1.0 / tol), ErrorKind::InsufficientEccentricity,
          "eccentricity of A^n(f^{-n} p) is too small to select a subspace");
  return Subspace(q.leftCols(l));
}

}  // namespace

Subspace section_xi(const CocycleGenerator& gen, const SkewProduct& dyn,
                    const FiberedPoint& point, int l, std::int64_t n, double tol) {
  require(n >= 1, ErrorKind::PreconditionViolation, "section_xi needs n >= 1");
  require(tol > 0.0, ErrorKind::PreconditionViolation, "section_xi needs tol > 0");
  const Subspace xi = xi_at(gen, dyn, point, l, n, tol);
  if (n > 10) {
    const Subspace prev = xi_at(gen, dyn, point, l, n - 10, tol);
    require(grass_distance(xi, prev) <= tol, ErrorKind::NoConvergence,
            "section has not stabilized; increase n");
  }
  return xi;
}

ComplementarySection complementary_section(const CocycleGenerator& gen, const SkewProduct& dyn,
                                           const FiberedPoint& point, int l, std::int64_t n,
                                           double tol) {
  ComplementarySection out;
  out.xi = section_xi(gen, dyn, point, l, n, tol);
  out.xi_star = section_xi(adjoint_cocycle(gen, dyn), dyn.inverse(), point, l, n, tol);
  out.eta = out.xi_star.orthogonal_complement();
  out.min_angle = min_principal_angle(out.xi, out.eta);
  require(out.min_angle > tol, ErrorKind::NonTransverse, "xi and eta are not transverse");
  return out;
}

double hyperplane_mass(const AtomicGrassMeasure& m, const Subspace& v, double tol_angle) {
  require(v.dim() == m.dim() && v.rank() == m.dim() - m.rank(), ErrorKind::RankMismatch,
          "hyperplane subspace must have rank d - l");
  const double threshold = std::sin(tol_angle);
  double mass = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Matrix stacked(m.dim(), m.dim());
    stacked << m.atoms()[i].frame(), v.frame();
    const RealVector s = singular_values(stacked);
    if (s(s.size() - 1) < threshold) mass += m.weights()[i];
  }
  return mass;
}

QuasiProjective QuasiProjective::normalize(const Matrix& l_mat, double threshold) {
  const double nrm = op_norm(l_mat);
  require(nrm > 0.0, ErrorKind::ZeroMatrix, "cannot normalize the zero matrix");
  QuasiProjective q;
  q.q_ = l_mat / nrm;
  q.threshold_ = threshold;
  Eigen::JacobiSVD<Matrix> svd(q.q_, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  int k = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) < threshold) ++k;
  q.kernel_dim_ = k;
  q.kernel_ = svd.matrixV().rightCols(k);
  return q;
}

Subspace QuasiProjective::apply(const Subspace& s) const {
  const Matrix img = q_ * s.frame();
  const RealVector sv = singular_values(img);
  require(sv(sv.size() - 1) >= threshold_, ErrorKind::KernelHit,
          "subspace meets the kernel of the quasi-projective map");
  return Subspace(img);
}

FiberedPoint one_sided_projection(const SkewProduct& dyn, const FiberedPoint& p, Symbol reference) {
  const BiSequence base = BiSequence::splice(BiSequence::constant(reference), p.base, 0);
  return {base, fiber_holonomy(dyn, p.base, base, p.t, Leaf::Stable)};
}

namespace {

class OneSidedImpl final : public GeneratorImpl {
 public:
  OneSidedImpl(CocycleGenerator inner, SkewProduct dyn, Symbol reference)
      : inner_(std::move(inner)), dyn_(std::move(dyn)), reference_(reference) {}
  int dim() const override { return inner_.dim(); }
  int window() const override {
    return std::max(inner_.window(), kMetricCutoff) + dyn_.family().window() + 1;
  }
  double holder_alpha() const override { return inner_.holder_alpha(); }
  Matrix evaluate(const BiSequence& x, double t) const override {
    const FiberedPoint pi_p = one_sided_projection(dyn_, {x, t}, reference_);
    const FiberedPoint f_pi_p = dyn_.step(pi_p);
    const FiberedPoint pi_f_p = one_sided_projection(dyn_, dyn_.step({x, t}), reference_);
    const Matrix h = strong_holonomy(inner_, dyn_, f_pi_p, pi_f_p, Leaf::Stable).matrix;
    return h * inner_.evaluate(pi_p);
  }
  std::string kind_name() const override { return "one_sided"; }

 private:
  CocycleGenerator inner_;
  SkewProduct dyn_;
  Symbol reference_;
};

}  // namespace

CocycleGenerator reduce_one_sided(const CocycleGenerator& gen, const SkewProduct& dyn,
                                  Symbol reference) {
  require(!dyn.reversed(), ErrorKind::PreconditionViolation,
          "one-sided reduction is defined over the forward dynamics");
  require(reference >= 0 && reference < dyn.family().alphabet_size(), ErrorKind::InvalidConfig,
          "reference symbol outside the alphabet");
  return CocycleGenerator(std::make_shared<OneSidedImpl>(gen, dyn, reference));
}

}  // namespace cocycle
