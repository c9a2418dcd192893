#include "qdpc/numerics/radau.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qdpc/errors.hpp"

namespace qdpc {

namespace {

// Radau IIA, three stages.
const double kSqrt6 = std::sqrt(6.0);
const std::array<std::array<double, 3>, 3> kButcher = {{
    {(88.0 - 7.0 * kSqrt6) / 360.0, (296.0 - 169.0 * kSqrt6) / 1800.0, (-2.0 + 3.0 * kSqrt6) / 225.0},
    {(296.0 + 169.0 * kSqrt6) / 1800.0, (88.0 + 7.0 * kSqrt6) / 360.0, (-2.0 - 3.0 * kSqrt6) / 225.0},
    {(16.0 - kSqrt6) / 36.0, (16.0 + kSqrt6) / 36.0, 1.0 / 9.0},
}};
const std::array<double, 3> kNodes = {(4.0 - kSqrt6) / 10.0, (4.0 + kSqrt6) / 10.0, 1.0};

// Embedded error estimator (RADAU5): err = (u1/h - A)^{-1} (f0 + sum dd_i z_i / h).
const std::array<double, 3> kErrorWeights = {-(13.0 + 7.0 * kSqrt6) / 3.0, (-13.0 + 7.0 * kSqrt6) / 3.0,
                                             -1.0 / 3.0};
const double kRealEigen = 30.0 / (6.0 + std::cbrt(81.0) - std::cbrt(9.0));

constexpr double kSafety = 0.9;
constexpr double kMaxShrink = 5.0;  // h_new >= h / 5
constexpr double kMaxGrow = 8.0;    // h_new <= 8 h

class StageSystem {
 public:
  StageSystem(const Matrix& a, double h) : a_(a), h_(h), n_(a.rows()), lu_(assemble(a, h)) {}

  double step() const { return h_; }

  // Solves Z_i = h sum_j k_ij A (y + Z_j) for the stage increments; the
  // Newton corrections use a quadruple-precision residual.
  Vector solve(std::span<const double> y, const SolverConfig& cfg, SolverStats& stats) const {
    const std::size_t n = n_;
    const Vector ay = a_ * y;
    Vector rhs(3 * n);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t p = 0; p < n; ++p) rhs[i * n + p] = h_ * kNodes[i] * ay[p];
    }
    Vector z = lu_.solve(rhs);
    ++stats.newton_iterations;

    const double y_scale = norm_inf(y);
    const std::vector<Wide> ay_wide = wide_product(a_, y);
    double previous = norm_inf(z);
    for (int iter = 1; iter < cfg.max_newton_iters; ++iter) {
      std::array<std::vector<Wide>, 3> az;
      for (std::size_t j = 0; j < 3; ++j) {
        az[j] = wide_product(a_, std::span<const double>(z).subspan(j * n, n));
        for (std::size_t p = 0; p < n; ++p) az[j][p] += ay_wide[p];
      }
      Vector residual(3 * n);
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t p = 0; p < n; ++p) {
          Wide acc = -static_cast<Wide>(z[i * n + p]);
          for (std::size_t j = 0; j < 3; ++j) acc += static_cast<Wide>(h_ * kButcher[i][j]) * az[j][p];
          residual[i * n + p] = static_cast<double>(acc);
        }
      }
      const Vector dz = lu_.solve(residual);
      ++stats.newton_iterations;
      for (std::size_t k = 0; k < z.size(); ++k) z[k] += dz[k];
      const double size = norm_inf(dz);
      if (size <= cfg.newton_tol * std::max({1e-300, y_scale, norm_inf(z)})) return z;
      // Corrections that stop shrinking have hit the rounding floor of the
      // residual; accept once that floor sits far below the error tolerance.
      if (iter >= 2 && size >= 0.5 * previous && size <= 1e-3 * (cfg.abs_tol + cfg.rel_tol * y_scale)) return z;
      previous = size;
    }
    std::ostringstream msg;
    msg << "stage equations did not converge in " << cfg.max_newton_iters << " iterations (h = " << h_ << ")";
    throw NewtonDivergence(msg.str());
  }

 private:
  static Matrix assemble(const Matrix& a, double h) {
    const std::size_t n = a.rows();
    Matrix m = Matrix::identity(3 * n);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const double w = h * kButcher[i][j];
        for (std::size_t p = 0; p < n; ++p) {
          for (std::size_t q = 0; q < n; ++q) m(i * n + p, j * n + q) -= w * a(p, q);
        }
      }
    }
    return m;
  }

  const Matrix& a_;
  double h_;
  std::size_t n_;
  LuFactorization lu_;
};

double scaled_rms(std::span<const double> v, std::span<const double> y0, std::span<const double> y1,
                  const SolverConfig& cfg) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = v[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(v.size()));
}

// Scaled local error estimate of one step.
double estimate_error(const Matrix& a, double h, std::span<const double> y0, std::span<const double> y1,
                      std::span<const double> z, bool refine, const SolverConfig& cfg) {
  const std::size_t n = a.rows();
  Matrix e1 = Matrix::identity(n) * (kRealEigen / h);
  e1 -= a;
  const LuFactorization lu(std::move(e1));

  Vector weighted(n);
  for (std::size_t p = 0; p < n; ++p) {
    weighted[p] = (kErrorWeights[0] * z[p] + kErrorWeights[1] * z[n + p] + kErrorWeights[2] * z[2 * n + p]) / h;
  }
  Vector rhs = a * y0;
  for (std::size_t p = 0; p < n; ++p) rhs[p] += weighted[p];
  Vector est = lu.solve(rhs);
  double err = scaled_rms(est, y0, y1, cfg);

  if (err >= 1.0 && refine) {
    // Second pass damps the estimate for very stiff components.
    Vector shifted(n);
    for (std::size_t p = 0; p < n; ++p) shifted[p] = y0[p] + est[p];
    rhs = a * shifted;
    for (std::size_t p = 0; p < n; ++p) rhs[p] += weighted[p];
    est = lu.solve(rhs);
    err = scaled_rms(est, y0, y1, cfg);
  }
  return std::max(err, 1e-10);
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || !(cfg.newton_tol > 0.0) || !(cfg.max_step > 0.0) ||
      cfg.max_newton_iters < 2 || cfg.max_steps < 1 || cfg.initial_step < 0.0) {
    throw InvalidParams("solver tolerances and limits must be positive (max_newton_iters >= 2)");
  }
}

Trajectory integrate(const Matrix& a, std::span<const double> y0, double t0, double t_end,
                     std::span<const double> checkpoints, const SolverConfig& cfg) {
  validate(cfg);
  if (a.rows() != a.cols() || a.rows() != y0.size()) throw DomainError("integrate: dimension mismatch");
  if (!(t_end > t0)) throw DomainError("integrate: t_end must exceed t0");

  std::vector<double> targets;
  for (double c : checkpoints) {
    if (c < t0 || c > t_end) throw DomainError("integrate: checkpoint outside the time span");
    if (!targets.empty() && !(c > targets.back())) throw DomainError("integrate: checkpoints must increase");
    if (c > t0) targets.push_back(c);
  }
  if (targets.empty() || targets.back() < t_end) targets.push_back(t_end);

  Trajectory out;
  out.times.push_back(t0);
  out.states.emplace_back(y0.begin(), y0.end());

  const double norm = norm_inf(a);
  double h = cfg.initial_step > 0.0 ? cfg.initial_step : (norm > 0.0 ? 1e-2 / norm : t_end - t0);
  h = std::min(h, cfg.max_step);

  Vector y(y0.begin(), y0.end());
  double t = t0;
  std::size_t next = 0;
  bool first = true;
  bool last_rejected = false;
  double h_accepted = 0.0;
  double err_accepted = 0.0;

  while (next < targets.size()) {
    if (out.stats.steps >= cfg.max_steps) throw Error("integrate: step budget exhausted");
    const double target = targets[next];
    double h_step = std::min(h, cfg.max_step);
    bool lands = false;
    if (t + 1.0001 * h_step >= target) {
      h_step = target - t;
      lands = true;
    }

    const StageSystem stages(a, h_step);
    ++out.stats.factorizations;
    const Vector z = stages.solve(y, cfg, out.stats);
    const std::size_t n = y.size();
    Vector y_new(n);
    for (std::size_t p = 0; p < n; ++p) y_new[p] = y[p] + z[2 * n + p];

    const double err = estimate_error(a, h_step, y, y_new, z, first || last_rejected, cfg);
    ++out.stats.factorizations;

    // Step-size proposal, with the predictive (Gustafsson) correction.
    const int newton_iters = 2;
    const double fac = std::min(kSafety, kSafety * (1 + 2 * cfg.max_newton_iters) /
                                             static_cast<double>(newton_iters + 2 * cfg.max_newton_iters));
    double quot = std::max(1.0 / kMaxGrow, std::min(kMaxShrink, std::pow(err, 0.25) / fac));
    double h_new = h_step / quot;

    if (err < 1.0) {
      if (!first) {
        double gus = h_accepted / h_step * std::pow(err * err / err_accepted, 0.25) / kSafety;
        gus = std::max(1.0 / kMaxGrow, std::min(kMaxShrink, gus));
        quot = std::max(quot, gus);
        h_new = h_step / quot;
      }
      h_accepted = h_step;
      err_accepted = std::max(1e-2, err);
      ++out.stats.steps;
      first = false;

      y = std::move(y_new);
      if (lands) {
        t = target;
        out.times.push_back(t);
        out.states.push_back(y);
        ++next;
      } else {
        t += h_step;
      }
      if (last_rejected) h_new = std::min(h_new, h_step);
      last_rejected = false;
      h = std::min(h_new, cfg.max_step);
    } else {
      ++out.stats.rejected;
      h = first ? 0.1 * h_step : h_new;
      last_rejected = true;
      if (h < kMinStep) {
        std::ostringstream msg;
        msg << "step size underflow at t = " << t << " ns (h = " << h << " ns)";
        throw StepSizeUnderflow(msg.str());
      }
    }
  }
  return out;
}

}  // namespace qdpc
