#include "betadelta/qp.hpp"

#include <algorithm>
#include <cmath>

#include "betadelta/linalg.hpp"
#include "betadelta/rng.hpp"

namespace betadelta {

double soft_threshold(double v, double tau) {
  if (tau < 0.0) throw std::invalid_argument("soft_threshold: tau < 0");
  if (v > tau) return v - tau;
  if (v < -tau) return v + tau;
  return 0.0;
}

double beta_max(const DenseMatrix& A, const Vec& b) {
  return norm_inf(matvec_transpose(A, b));
}

double qp_objective(const DenseMatrix& A, const Vec& b, const Vec& x, double beta) {
  if (x.size() != A.cols || b.size() != A.rows) {
    throw std::invalid_argument("qp_objective: size mismatch");
  }
  const Vec Ax = matvec(A, x);
  double ss = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double d = Ax[i] - b[i];
    ss += d * d;
  }
  return 0.5 * ss + beta * norm1(x);
}

double kkt_residual_from_gradient(const Vec& x, const Vec& grad, double beta) {
  if (x.size() != grad.size()) {
    throw std::invalid_argument("kkt_residual_from_gradient: size mismatch");
  }
  const double threshold = kSupportThresholdRel * norm_inf(x);
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > threshold) {
      const double s = x[i] < 0.0 ? -1.0 : 1.0;
      r = std::max(r, std::abs(-grad[i] - beta * s));
    } else {
      r = std::max(r, std::abs(grad[i]) - beta);
    }
  }
  return std::max(r, 0.0);
}

double kkt_residual(const DenseMatrix& A, const Vec& b, const Vec& x, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("kkt_residual: beta <= 0");
  Vec r = matvec(A, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  const Vec grad = matvec_transpose(A, r);
  return kkt_residual_from_gradient(x, grad, beta);
}

double power_iteration_lmax(const DenseMatrix& A) {
  const std::size_t n = A.cols;
  if (A.rows == 0 || n == 0) return 0.0;
  Rng rng(0x243F6A8885A308D3ull);  // fixed stream: estimate is deterministic
  Vec v(n);
  for (double& vi : v) vi = rng.normal();
  const double vn = norm2(v);
  if (vn == 0.0) v[0] = 1.0;
  for (double& vi : v) vi /= std::max(vn, 1e-300);

  Vec av(A.rows), w(n);
  double lam = 0.0;
  for (int it = 0; it < 50; ++it) {
    matvec(A, v.data(), av.data());
    matvec_transpose(A, av.data(), w.data());
    const double wn = norm2(w);
    if (wn == 0.0) return 0.0;
    for (std::size_t j = 0; j < n; ++j) v[j] = w[j] / wn;
    if (std::abs(wn - lam) <= 1e-10 * wn) return wn;
    lam = wn;
  }
  return lam;
}

namespace {

SparseSolution finish(Vec x, const Vec& Ax, const Vec& b, double kkt,
                      std::size_t iterations, bool converged) {
  SparseSolution sol;
  sol.support = detect_support(x);
  sol.k = sol.support.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double d = Ax[i] - b[i];
    ss += d * d;
  }
  sol.residual_norm = std::sqrt(ss);
  sol.kkt = kkt;
  sol.iterations = iterations;
  sol.converged = converged;
  sol.x = std::move(x);
  return sol;
}

}  // namespace

SparseSolution solve_qp(const DenseMatrix& A, const Vec& b, const QpConfig& cfg,
                        const Vec* warm_start) {
  const std::size_t m = A.rows;
  const std::size_t n = A.cols;
  if (b.size() != m) throw std::invalid_argument("solve_qp: b size mismatch");
  if (cfg.beta <= 0.0) throw std::invalid_argument("solve_qp: beta <= 0");
  if (cfg.tol <= 0.0) throw std::invalid_argument("solve_qp: tol <= 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("solve_qp: max_iter < 1");
  if (!all_finite(A) || !all_finite(b)) {
    throw std::invalid_argument("solve_qp: non-finite input");
  }
  if (warm_start && (warm_start->size() != n || !all_finite(*warm_start))) {
    throw std::invalid_argument("solve_qp: bad warm start");
  }
  const double beta = cfg.beta;

  // The origin is optimal whenever ||A^T b||_inf <= beta.
  if (beta_max(A, b) <= beta) {
    Vec zero_ax(m, 0.0);
    SparseSolution sol = finish(Vec(n, 0.0), zero_ax, b, 0.0, 0, true);
    if (cfg.objective_trace) cfg.objective_trace->push_back(0.5 * dot(b, b));
    return sol;
  }

  double L = cfg.fixed_step_L;
  if (L <= 0.0) {
    if (cfg.step_rule == StepRule::kSpectralNorm) {
      L = 1.01 * power_iteration_lmax(A);
    } else {
      double fro2 = 0.0;
      for (double v : A.data) fro2 += v * v;
      L = std::max(fro2 / static_cast<double>(n), 1e-300);
    }
  }
  if (L <= 0.0) L = 1.0;
  const double l_cap = L * 0x1p50;

  Vec x = warm_start ? *warm_start : Vec(n, 0.0);
  Vec Ax(m), grad(n);
  matvec(A, x.data(), Ax.data());
  Vec r(m);
  for (std::size_t i = 0; i < m; ++i) r[i] = Ax[i] - b[i];
  matvec_transpose(A, r.data(), grad.data());
  double f = 0.5 * dot(r, r) + beta * norm1(x);

  Vec x_prev = x, grad_prev = grad, Ax_prev = Ax;
  Vec x_cand(n), Ax_cand(m);
  double t = 1.0, mom = 0.0;
  double kkt = kkt_residual_from_gradient(x, grad, beta);
  bool converged = kkt <= cfg.tol;
  std::size_t it = 0;
  if (cfg.objective_trace) cfg.objective_trace->push_back(f);

  while (!converged && it < cfg.max_iter) {
    ++it;
    const double inv_l = 1.0 / L;
    const double tau = beta * inv_l;
    for (std::size_t j = 0; j < n; ++j) {
      const double yj = x[j] + mom * (x[j] - x_prev[j]);
      const double gyj = grad[j] + mom * (grad[j] - grad_prev[j]);
      x_cand[j] = soft_threshold(yj - gyj * inv_l, tau);
    }
    matvec(A, x_cand.data(), Ax_cand.data());
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = Ax_cand[i] - b[i];
      ss += d * d;
    }
    const double f_cand = 0.5 * ss + beta * norm1(x_cand);

    if (cfg.step_rule == StepRule::kBacktracking) {
      // grow L until the quadratic model at y majorizes the smooth part
      double hy = 0.0, lin = 0.0, quad = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double ayi = Ax[i] + mom * (Ax[i] - Ax_prev[i]);
        const double d = ayi - b[i];
        hy += d * d;
      }
      hy *= 0.5;
      for (std::size_t j = 0; j < n; ++j) {
        const double yj = x[j] + mom * (x[j] - x_prev[j]);
        const double gyj = grad[j] + mom * (grad[j] - grad_prev[j]);
        const double dj = x_cand[j] - yj;
        lin += gyj * dj;
        quad += dj * dj;
      }
      const double model = hy + lin + 0.5 * L * quad;
      if (0.5 * ss > model + 1e-12 * (1.0 + std::abs(model)) && L < l_cap) {
        L *= 2.0;
        continue;
      }
    }

    if (f_cand <= f + 1e-12 * (1.0 + std::abs(f))) {
      std::swap(x_prev, x);
      std::swap(grad_prev, grad);
      std::swap(Ax_prev, Ax);
      std::swap(x, x_cand);
      std::swap(Ax, Ax_cand);
      f = f_cand;
      for (std::size_t i = 0; i < m; ++i) r[i] = Ax[i] - b[i];
      matvec_transpose(A, r.data(), grad.data());
      kkt = kkt_residual_from_gradient(x, grad, beta);
      if (cfg.objective_trace) cfg.objective_trace->push_back(f);
      if (kkt <= cfg.tol) {
        converged = true;
        break;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      mom = (t - 1.0) / t_next;
      t = t_next;
    } else if (mom == 0.0) {
      // plain step failed to descend: the step estimate is too small
      if (L >= l_cap) break;
      L *= 2.0;
    } else {
      // momentum overshoot: restart
      mom = 0.0;
      t = 1.0;
    }
  }

  return finish(std::move(x), Ax, b, kkt, it, converged);
}

}  // namespace betadelta
