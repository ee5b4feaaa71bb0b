#include "mixdisc/capacity.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mixdisc/structure.hpp"

namespace mixdisc {

namespace {

const double kLogTiny = std::log(1e-300);

struct Objective {
  double f = 0.0;
  RVector grad;  // projected onto sum = 0
};

Objective evaluate_objective(const MatrixTuple& t, const RVector& y) {
  const int n = t.dim();
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m += std::exp(y(i)) * t[i].matrix();
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) throw SingularPencil("pencil lost positive definiteness");
  Objective o;
  o.f = 2.0 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
  if (!(o.f > kLogTiny)) throw SingularPencil("pencil determinant below 1e-300");
  o.grad.resize(n);
  for (int i = 0; i < n; ++i) o.grad(i) = std::exp(y(i)) * llt.solve(t[i].matrix()).trace().real();
  o.grad.array() -= o.grad.mean();
  return o;
}

double geometric_mean(const RVector& v) { return std::exp(v.array().log().mean()); }

}  // namespace

double log_det_pd(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) throw SingularPencil("matrix is not positive definite");
  const double f = 2.0 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
  if (!(f > kLogTiny)) throw SingularPencil("determinant below 1e-300");
  return f;
}

CapacityResult capacity(const MatrixTuple& t, const CapacityOptions& options) {
  options.tol.validate();
  const int n = t.dim();
  const double eps = std::numeric_limits<double>::epsilon();
  const double c1 = 1e-4;

  RVector y = RVector::Zero(n);
  Objective cur = evaluate_objective(t, y);
  RVector best_y = y;
  double best_f = cur.f;
  double step = 1.0;
  long iter = 0;

  while (iter < options.max_iter && cur.grad.norm() >= options.tol.opt_tol) {
    const double g2 = cur.grad.squaredNorm();
    double h = step;
    RVector next_y;
    Objective next;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      next_y = y - h * cur.grad;
      try {
        next = evaluate_objective(t, next_y);
      } catch (const SingularPencil&) {
        if (h < 1e-12) throw;
        h *= 0.5;
        continue;
      }
      // slack of a few ulps so round-off near the optimum does not stall
      if (next.f <= cur.f - c1 * h * g2 + 8 * eps * (1.0 + std::abs(cur.f))) {
        accepted = true;
        break;
      }
      h *= 0.5;
    }
    ++iter;
    if (!accepted) break;

    const RVector s = next_y - y;
    const RVector dg = next.grad - cur.grad;
    const double sy = s.dot(dg);
    step = sy > 0 ? std::clamp(s.squaredNorm() / sy, 1e-10, 1e10) : std::min(2 * h, 1e10);
    y = next_y;
    cur = next;
    if (cur.f < best_f) {
      best_f = cur.f;
      best_y = y;
    }
  }

  CapacityResult r;
  r.converged = cur.grad.norm() < options.tol.opt_tol;
  if (!r.converged && cur.f > best_f) {
    y = best_y;
    cur = evaluate_objective(t, y);
  }
  r.value = std::exp(cur.f);
  r.minimizer_x = y.array().exp();
  r.gradient_norm = cur.grad.norm();
  r.iterations = iter;
  if (!r.converged && options.throw_on_nonconvergence) {
    throw NonConvergence("capacity", iter, r.gradient_norm, std::vector<double>(y.data(), y.data() + n));
  }
  return r;
}

double ds_defect(const MatrixTuple& t) {
  const int n = t.dim();
  double trace = 0.0;
  CMatrix s = -CMatrix::Identity(n, n);
  for (const auto& a : t) {
    trace = std::max(trace, std::abs(a.trace() - 1.0));
    s += a.matrix();
  }
  return trace + max_abs(s);
}

ScalingResult scale_to_doubly_stochastic(const MatrixTuple& t, const ScalingOptions& options) {
  options.tol.validate();
  const int n = t.dim();
  if (options.require_indecomposable && n <= kSubsetScanLimit) {
    const RankCondition r = is_indecomposable(t, options.tol);
    if (!r.holds) {
      std::string w;
      for (int i : r.witness) w += (w.empty() ? "" : ",") + std::to_string(i);
      throw NotIndecomposable("subset {" + w + "} has rank <= its size");
    }
  }

  std::vector<CMatrix> a = t.dense();
  CMatrix x = CMatrix::Identity(n, n);
  RVector c = RVector::Ones(n);

  auto current = [&] {
    std::vector<HermitianMatrix> mats;
    for (const auto& m : a) mats.emplace_back(m);
    return MatrixTuple(std::move(mats));
  };

  ScalingResult r;
  double defect = ds_defect(t);
  long iter = 0;
  while (defect >= options.tol.ds_tol && iter < options.max_iter) {
    CMatrix sum = CMatrix::Zero(n, n);
    for (const auto& m : a) sum += m;
    const CMatrix l = inv_sqrt_psd(HermitianMatrix(sum), options.tol).matrix();
    for (auto& m : a) {
      m = l * m * l;
      m = 0.5 * (m + m.adjoint()).eval();
    }
    x = l * x;
    for (int i = 0; i < n; ++i) {
      const double tr = a[static_cast<std::size_t>(i)].trace().real();
      if (!(tr > 0.0)) throw SingularPencil("slot " + std::to_string(i) + " lost its trace");
      a[static_cast<std::size_t>(i)] /= tr;
      c(i) /= tr;
    }
    ++iter;
    defect = ds_defect(current());
    r.defect_history.push_back(defect);
  }

  r.scaled = current();
  r.transform_x = x;
  r.trace_scalars = c;
  r.ds_defect = defect;
  r.iterations = iter;
  r.converged = defect < options.tol.ds_tol;
  if (!r.converged && options.throw_on_nonconvergence) {
    throw NonConvergence("operator scaling", iter, defect);
  }

  // X = U P with P = (X^* X)^{1/2}; B_i = c_i P A_i P is unitarily similar to
  // the scaled tuple and is the symmetric form alpha_i S A_i S with
  // S = P sqrt(g), alpha = c / g, g the geometric mean of c.
  const HermitianMatrix p = sqrt_psd(HermitianMatrix(CMatrix(x.adjoint() * x)));
  const double g = geometric_mean(c);
  r.alpha = c / g;
  r.s = p * std::sqrt(g);
  std::vector<HermitianMatrix> canonical;
  for (int i = 0; i < n; ++i) canonical.push_back(t[i].congruence(r.s.matrix()) * r.alpha(i));
  r.canonical = MatrixTuple(std::move(canonical));
  return r;
}

double capacity_via_scaling(const ScalingResult& r) {
  if (!r.converged) throw PreconditionViolated("scaling did not converge");
  return 1.0 / (std::norm(det(r.transform_x)) * r.trace_scalars.prod());
}

double capacity_via_scaling(const MatrixTuple& t, const ScalingOptions& options) {
  return capacity_via_scaling(scale_to_doubly_stochastic(t, options));
}

CapacityBoundReport capacity_bound_report(const MatrixTuple& t, const CapacityOptions& options) {
  const int n = t.dim();
  CapacityBoundReport r;
  r.discriminant = eval_polarized(t);
  if (!(r.discriminant > 0.0)) throw PreconditionViolated("capacity ratio needs D > 0");
  r.capacity = capacity(t, options).value;
  r.ratio = r.capacity / r.discriminant;
  double upper = 1.0;
  for (int k = 1; k <= n; ++k) upper *= static_cast<double>(n) / k;
  r.upper = upper;
  r.within_bounds = r.ratio >= 1.0 - 1e-6 && r.ratio <= upper + 1e-6;
  return r;
}

}  // namespace mixdisc
