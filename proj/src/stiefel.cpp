#include "stiefel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

namespace entloss::stiefel {

namespace {

double real_inner(const CMatrix& x, const CMatrix& y) {
  return (x.adjoint() * y).trace().real();
}

} // namespace

CMatrix tangent_project(const CMatrix& u, const CMatrix& ambient) {
  CMatrix utg = u.adjoint() * ambient;
  CMatrix herm = 0.5 * (utg + utg.adjoint());
  return ambient - u * herm;
}

CMatrix retract(const CMatrix& u, const CMatrix& step) {
  CMatrix moved = u + step;
  Eigen::HouseholderQR<CMatrix> qr(moved);
  CMatrix thin_q = qr.householderQ() * CMatrix::Identity(moved.rows(), moved.cols());
  CMatrix r = qr.matrixQR().topRows(moved.cols()).template triangularView<Eigen::Upper>();
  for (int j = 0; j < thin_q.cols(); ++j) {
    complexd d = r(j, j);
    if (std::abs(d) > 0.0) {
      thin_q.col(j) *= d / std::abs(d);
    }
  }
  return thin_q;
}

Outcome minimize(const Objective& objective, CMatrix u0, const Options& opt) {
  Outcome out;
  CMatrix u = std::move(u0);
  CMatrix grad(u.rows(), u.cols());
  double value = objective(u, &grad);
  CMatrix xi = tangent_project(u, grad);

  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(std::max(opt.max_iter, 1)) + 1);
  history.push_back(value);

  double step = opt.init_step;
  CMatrix prev_u;
  CMatrix prev_xi;
  bool have_prev = false;

  constexpr double armijo_c = 1e-4;
  constexpr double step_floor = 1e-14;
  constexpr double step_cap = 1e6;

  int iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    double grad_sq = real_inner(xi, xi);
    if (grad_sq <= 1e-24) {
      out.converged = true;
      break;
    }

    if (have_prev) {
      CMatrix s = u - prev_u;
      CMatrix y = xi - prev_xi;
      double ss = real_inner(s, s);
      double sy = std::abs(real_inner(s, y));
      if (sy > 1e-30) {
        step = std::clamp(ss / sy, step_floor * 10.0, step_cap);
      }
    }

    double trial_step = step;
    bool accepted = false;
    CMatrix candidate;
    double cand_value = value;
    while (trial_step >= step_floor) {
      candidate = retract(u, -trial_step * xi);
      cand_value = objective(candidate, nullptr);
      if (cand_value <= value - armijo_c * trial_step * grad_sq) {
        accepted = true;
        break;
      }
      trial_step *= 0.5;
    }
    if (!accepted) {
      // No acceptable decrease along the projected gradient: stationary
      // to working precision.
      out.converged = true;
      break;
    }

    prev_u = u;
    prev_xi = xi;
    have_prev = true;

    u = candidate;
    value = objective(u, &grad);
    xi = tangent_project(u, grad);
    step = std::max(trial_step, step_floor * 10.0);
    history.push_back(value);

    std::size_t window = static_cast<std::size_t>(opt.sweep);
    if (history.size() > window &&
        history[history.size() - 1 - window] - value < opt.tol) {
      out.converged = true;
      ++iter;
      break;
    }
  }

  out.value = value;
  out.point = std::move(u);
  out.iterations = iter;
  return out;
}

} // namespace entloss::stiefel
