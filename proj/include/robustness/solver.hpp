#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "robustness/pure.hpp"
#include "robustness/random.hpp"
#include "robustness/state.hpp"

namespace robustness {

enum class SearchMethod {
  barrier,      // damped-Newton log-barrier path following
  random_walk,  // conditional random walk with shrinking steps
};

struct SolverConfig {
  std::uint64_t seed = 1;
  int restarts = 4;
  double initial_step = 0.1;
  double step_shrink = 0.5;
  double min_step = 1e-7;
  long max_iters = 200000;
  double agreement_tol = 1e-3;
  SearchMethod method = SearchMethod::barrier;
  double barrier_gap = 1e-8;  // stop once the barrier duality gap 3n/t is below this
  int walk_patience = 100;    // consecutive rejections before the step shrinks

  void validate() const {
    if (restarts < 1 || initial_step <= 0 || step_shrink <= 0 || step_shrink >= 1 ||
        min_step <= 0 || max_iters < 1 || agreement_tol <= 0 || barrier_gap <= 0 ||
        walk_patience < 1) {
      throw Error(ErrorKind::invalid_state, "invalid solver configuration");
    }
  }
};

struct SolverResult {
  double value = 0.0;
  Pseudomixture pseudomixture;
  long iterations = 0;
  bool converged = false;
  double restart_spread = 0.0;
  std::vector<double> restart_values;
};

/// Counts calls into the numerical solvers; lets tests prove a code path never
/// reached them.
inline std::atomic<long>& solver_invocations() {
  static std::atomic<long> count{0};
  return count;
}

namespace detail {

inline void require_solvable(const PartyStructure& s) {
  if (!ppt_small_dimension(s)) {
    throw Error(ErrorKind::unsupported_dimension,
                "numerical robustness needs a bipartite system with n <= 6");
  }
}

/// One nonzero entry of a sparse basis matrix.
struct BasisEntry {
  int row;
  int col;
  Complex value;
};
using SparseBasisElement = std::vector<BasisEntry>;

/// Orthonormal (Frobenius) basis of n x n Hermitian matrices: n diagonal
/// units followed by (E_ij + E_ji)/sqrt2 and i(E_ij - E_ji)/sqrt2 for i < j.
inline std::vector<SparseBasisElement> hermitian_basis(int n) {
  std::vector<SparseBasisElement> basis;
  const double r = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < n; ++i) basis.push_back({{i, i, 1.0}});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      basis.push_back({{i, j, r}, {j, i, r}});
      basis.push_back({{i, j, Complex(0, r)}, {j, i, Complex(0, -r)}});
    }
  }
  return basis;
}

inline SparseBasisElement transpose_b(const SparseBasisElement& e, const PartyStructure& s) {
  SparseBasisElement out;
  const int last = s.parties() - 1;
  for (const auto& [row, col, v] : e) {
    auto rd = s.digits(row), cd = s.digits(col);
    std::swap(rd[static_cast<std::size_t>(last)], cd[static_cast<std::size_t>(last)]);
    out.push_back({s.flatten(rd), s.flatten(cd), v});
  }
  return out;
}

/// Complex product without the inf/nan recovery path of operator*.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

/// Feasible set {X : X >= 0, X^{T_B} >= 0, (rho + X)^{T_B} >= 0}.
class RobustnessProblem {
 public:
  explicit RobustnessProblem(const DensityMatrix& rho)
      : structure_(rho.structure()),
        n_(rho.dim()),
        rho_pt_(robustness::transpose_b(rho.matrix(), rho.structure())),
        basis_(hermitian_basis(n_)) {
    for (const auto& b : basis_) basis_pt_.push_back(transpose_b(b, structure_));
  }

  int dim() const { return n_; }
  const ComplexMatrix& rho_pt() const { return rho_pt_; }

  ComplexMatrix assemble(const RealVector& x) const {
    ComplexMatrix m = ComplexMatrix::Zero(n_, n_);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      for (const auto& [row, col, v] : basis_[k]) m(row, col) += x(static_cast<Eigen::Index>(k)) * v;
    }
    return m;
  }

  RealVector coordinates(const ComplexMatrix& m) const {
    RealVector x(static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      Complex acc = 0.0;
      for (const auto& [row, col, v] : basis_[k]) acc += std::conj(v) * m(row, col);
      x(static_cast<Eigen::Index>(k)) = acc.real();
    }
    return x;
  }

  /// All three constraint matrices strictly positive definite.
  bool strictly_feasible(const ComplexMatrix& x) const {
    const ComplexMatrix xpt = robustness::transpose_b(x, structure_);
    return is_positive_definite(x) && is_positive_definite(xpt) &&
           is_positive_definite(rho_pt_ + xpt);
  }

  /// Constraints hold with minimum eigenvalue >= 0.
  bool feasible(const ComplexMatrix& x) const {
    const ComplexMatrix xpt = robustness::transpose_b(x, structure_);
    return min_eigenvalue(x) >= 0.0 && min_eigenvalue(xpt) >= 0.0 &&
           min_eigenvalue(rho_pt_ + xpt) >= 0.0;
  }

  /// Gradient and Hessian of t Tr X - sum_c log det F_c(X). With G = F^{-1}
  /// and sparse directions, tr(G A_k) and tr(G A_k G A_l) reduce to a few
  /// entries of G.
  void newton_system(const ComplexMatrix& x, double t, RealVector& grad, Eigen::MatrixXd& hess) const {
    const auto d = static_cast<Eigen::Index>(basis_.size());
    grad = RealVector::Zero(d);
    grad.head(n_).setConstant(t);
    hess = Eigen::MatrixXd::Zero(d, d);
    const ComplexMatrix xpt = robustness::transpose_b(x, structure_);
    const ComplexMatrix constraint[3] = {x, xpt, rho_pt_ + xpt};
    ComplexMatrix t_k(n_, n_);
    for (int c = 0; c < 3; ++c) {
      const ComplexMatrix g = constraint[c].llt().solve(ComplexMatrix::Identity(n_, n_));
      const auto& dir = c == 0 ? basis_ : basis_pt_;
      for (Eigen::Index k = 0; k < d; ++k) {
        const auto& ek = dir[static_cast<std::size_t>(k)];
        // T = G A_k G, so Hess_kl = Re tr(A_l T).
        t_k.setZero();
        Complex tr = 0.0;
        for (const auto& [p, q, b] : ek) {
          tr += mul(b, g(q, p));
          for (int j = 0; j < n_; ++j) {
            const Complex bg = mul(b, g(q, j));
            for (int i = 0; i < n_; ++i) t_k(i, j) += mul(g(i, p), bg);
          }
        }
        grad(k) -= tr.real();
        for (Eigen::Index l = k; l < d; ++l) {
          double acc = 0.0;
          for (const auto& [r, q, w] : dir[static_cast<std::size_t>(l)]) acc += mul(w, t_k(q, r)).real();
          hess(k, l) += acc;
          if (l != k) hess(l, k) += acc;
        }
      }
    }
  }

 private:
  PartyStructure structure_;
  int n_;
  ComplexMatrix rho_pt_;
  std::vector<SparseBasisElement> basis_;
  std::vector<SparseBasisElement> basis_pt_;
};

struct RunOutcome {
  ComplexMatrix x;
  long iterations = 0;
  bool hit_cap = false;
};

inline RunOutcome barrier_run(const RobustnessProblem& prob, ComplexMatrix x0,
                              const SolverConfig& cfg) {
  RealVector x = prob.coordinates(x0);
  const double nu = 3.0 * prob.dim();
  RunOutcome out;
  double t = 1.0;
  RealVector grad;
  Eigen::MatrixXd hess;
  while (true) {
    for (int inner = 0; inner < 200; ++inner) {
      if (out.iterations >= cfg.max_iters) {
        out.hit_cap = true;
        out.x = prob.assemble(x);
        return out;
      }
      ++out.iterations;
      prob.newton_system(prob.assemble(x), t, grad, hess);
      const RealVector step = -hess.ldlt().solve(grad);
      const double decrement2 = -grad.dot(step);
      if (!(decrement2 >= 0.0) || !step.allFinite()) break;
      const double delta = std::sqrt(decrement2);
      double alpha = delta > 0.25 ? 1.0 / (1.0 + delta) : 1.0;
      RealVector trial = x + alpha * step;
      int backoff = 0;
      while (!prob.strictly_feasible(prob.assemble(trial)) && backoff < 60) {
        alpha *= 0.5;
        trial = x + alpha * step;
        ++backoff;
      }
      if (backoff == 60) break;
      x = trial;
      if (decrement2 < 1e-10) break;
    }
    if (nu / t < cfg.barrier_gap) break;
    t *= 8.0;
  }
  out.x = prob.assemble(x);
  return out;
}

inline RunOutcome random_walk_run(const RobustnessProblem& prob, ComplexMatrix x0,
                                  const SolverConfig& cfg, Rng& rng) {
  RunOutcome out;
  ComplexMatrix x = std::move(x0);
  double trace = x.trace().real();
  double step = cfg.initial_step;
  int rejections = 0;
  while (step >= cfg.min_step) {
    if (out.iterations >= cfg.max_iters) {
      out.hit_cap = true;
      break;
    }
    ++out.iterations;
    ComplexMatrix dir = random_hermitian(prob.dim(), rng);
    dir /= dir.norm();
    const ComplexMatrix trial = x + step * dir;
    const double trial_trace = trial.trace().real();
    if (trial_trace < trace - 1e-12 && prob.feasible(trial)) {
      x = trial;
      trace = trial_trace;
      rejections = 0;
    } else if (++rejections >= cfg.walk_patience) {
      step *= cfg.step_shrink;
      rejections = 0;
    }
  }
  out.x = std::move(x);
  return out;
}

inline Pseudomixture pseudomixture_from(const DensityMatrix& rho, const ComplexMatrix& x) {
  const double s = x.trace().real();
  const ComplexMatrix h = 0.5 * (x + x.adjoint());
  DensityMatrix plus = DensityMatrix::from_unnormalized(rho.structure(), rho.matrix() + h);
  if (s <= 0.0) return {rho, rho, 0.0};
  return {std::move(plus), DensityMatrix::from_unnormalized(rho.structure(), h), s};
}

}  // namespace detail

/// Minimal s >= 0 with (rho + s sigma)^{T_B} PSD. Returns +infinity when no
/// finite admixture of sigma suffices.
inline double relative_robustness(const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_solvable(rho.structure());
  if (!(sigma.structure() == rho.structure())) {
    throw Error(ErrorKind::bad_partition, "rho and sigma have different structures");
  }
  if (!is_separable_small(sigma).separable) {
    throw Error(ErrorKind::not_separable_reference, "reference state fails the PPT test");
  }
  ++solver_invocations();
  const ComplexMatrix rho_pt = transpose_b(rho.matrix(), rho.structure());
  const ComplexMatrix sigma_pt = transpose_b(sigma.matrix(), sigma.structure());
  if (min_eigenvalue(rho_pt) >= -tol::psd) return 0.0;

  const RealVector sig = hermitian_eigenvalues(sigma_pt);
  if (sig(0) > 1e-12 * sig(sig.size() - 1)) {
    const ComplexMatrix inv_root = hermitian_function(sigma_pt, [](double v) { return 1.0 / std::sqrt(v); });
    ComplexMatrix k = -(inv_root * rho_pt * inv_root);
    k = 0.5 * (k + k.adjoint());
    const RealVector ev = hermitian_eigenvalues(k);
    return std::max(0.0, ev(ev.size() - 1));
  }

  auto ok = [&](double s) { return min_eigenvalue(rho_pt + s * sigma_pt) >= -tol::psd; };
  double hi = rho.dim() / 2.0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > 1e12) return std::numeric_limits<double>::infinity();
  }
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Robustness relative to (1/n) I.
inline double random_robustness_numeric(const DensityMatrix& rho) {
  return relative_robustness(rho, DensityMatrix::maximally_mixed(rho.structure()));
}

/// Minimizes Tr X over Hermitian X with X >= 0, X^{T_B} >= 0 and
/// (rho + X)^{T_B} >= 0. The objective is convex, so every restart should land
/// on the same value; the spread across restarts is reported.
inline SolverResult absolute_robustness(const DensityMatrix& rho, const SolverConfig& cfg = {}) {
  cfg.validate();
  detail::require_solvable(rho.structure());
  ++solver_invocations();

  const detail::RobustnessProblem prob(rho);
  const int n = prob.dim();
  const double shift = std::max(0.0, -min_eigenvalue(prob.rho_pt())) + 0.5;
  const ComplexMatrix start = shift * ComplexMatrix::Identity(n, n);

  std::vector<double> values;
  long iterations = 0;
  std::optional<ComplexMatrix> best;
  double best_value = std::numeric_limits<double>::infinity();
  bool cap = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(r));
    ComplexMatrix x0 = start;
    if (r > 0) {
      ComplexMatrix h = random_hermitian(n, rng);
      h *= cfg.initial_step * shift / h.norm();
      double scale = 1.0;
      while (!prob.strictly_feasible(start + scale * h) && scale > 1e-6) scale *= 0.5;
      x0 = start + scale * h;
    }
    const detail::RunOutcome run = cfg.method == SearchMethod::barrier
                                       ? detail::barrier_run(prob, x0, cfg)
                                       : detail::random_walk_run(prob, x0, cfg, rng);
    iterations += run.iterations;
    cap = cap || run.hit_cap;
    const double value = std::max(0.0, run.x.trace().real());
    values.push_back(value);
    if (value < best_value) {
      best_value = value;
      best = run.x;
    }
  }

  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double spread = *hi - *lo;
  return SolverResult{best_value, detail::pseudomixture_from(rho, *best), iterations,
                      !cap && spread <= cfg.agreement_tol, spread, std::move(values)};
}

}  // namespace robustness
