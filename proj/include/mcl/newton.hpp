#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <string>

#include "mcl/errors.hpp"

namespace mcl {

// Residual (and optionally Jacobian) of a square system at x. Rows should
// already be scaled so that the tolerance is meaningful for every equation.
using NewtonSystem = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* J)>;

struct NewtonOptions {
  int max_iter = 50;
  double tol = 1e-12;           // on the infinity norm of the residual
  int max_halvings = 10;        // damping on residual increase
  double cond_limit = 1e14;     // larger condition estimates count as singular
};

// Ill-conditioned Jacobians take a truncated least-squares step instead; the
// iteration reports SingularJacobian only when that step makes no progress.

enum class NewtonStatus { Converged, NoConvergence, SingularJacobian };

struct NewtonResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // infinity norm at x
  int iterations = 0;
  NewtonStatus status = NewtonStatus::NoConvergence;
};

inline double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

inline double condition_estimate(const Eigen::MatrixXd& J) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return INFINITY;
  return s(0) / s(s.size() - 1);
}

/// Damped Newton iteration that reports its outcome instead of throwing.
inline NewtonResult newton_solve(const NewtonSystem& f, Eigen::VectorXd x, const NewtonOptions& opt = {}) {
  NewtonResult out;
  const Eigen::Index n = x.size();
  Eigen::VectorXd r(n), r_trial(n);
  Eigen::MatrixXd J(n, n);
  f(x, r, nullptr);
  double norm_r = inf_norm(r);
  for (int it = 0; it < opt.max_iter; ++it) {
    out.iterations = it;
    if (!std::isfinite(norm_r)) break;
    if (norm_r < opt.tol) {
      out.status = NewtonStatus::Converged;
      break;
    }
    f(x, r, &J);
    const bool singular = !(condition_estimate(J) <= opt.cond_limit);
    Eigen::VectorXd step;
    if (singular) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
      svd.setThreshold(1.0 / opt.cond_limit);
      step = svd.solve(r);
    } else {
      step = J.partialPivLu().solve(r);
    }
    if (!step.allFinite()) {
      out.status = NewtonStatus::SingularJacobian;
      break;
    }
    double lambda = 1.0;
    Eigen::VectorXd trial = x - step;
    f(trial, r_trial, nullptr);
    for (int k = 0; k < opt.max_halvings && !(inf_norm(r_trial) < norm_r); ++k) {
      lambda /= 2;
      trial = x - lambda * step;
      f(trial, r_trial, nullptr);
    }
    if (!(inf_norm(r_trial) < norm_r)) {
      if (singular) out.status = NewtonStatus::SingularJacobian;
      break;  // stalled
    }
    x = trial;
    r = r_trial;
    norm_r = inf_norm(r);
    out.iterations = it + 1;
  }
  if (norm_r < opt.tol) out.status = NewtonStatus::Converged;
  else if (out.status == NewtonStatus::Converged) out.status = NewtonStatus::NoConvergence;
  out.x = x;
  out.residual = norm_r;
  return out;
}

/// Newton refinement; throws NoConvergence or SingularJacobian.
inline Eigen::VectorXd newton_refine(const NewtonSystem& f, const Eigen::VectorXd& x0, const NewtonOptions& opt = {}) {
  NewtonResult res = newton_solve(f, x0, opt);
  switch (res.status) {
    case NewtonStatus::Converged: return res.x;
    case NewtonStatus::SingularJacobian:
      throw SingularJacobian("Jacobian condition estimate exceeds " + std::to_string(opt.cond_limit));
    case NewtonStatus::NoConvergence: break;
  }
  throw NoConvergence("Newton iteration stopped at residual " + std::to_string(res.residual) + " after " +
                      std::to_string(res.iterations) + " iterations");
}

}  // namespace mcl
