#include "hemi/powell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hemi {

std::function<double(double)> Objective::along(const Eigen::VectorXd& x, const Eigen::VectorXd& d) const {
  const double base = value(x);
  return [this, x, d, base](double t) { return value(x + t * d) - base; };
}

LineMinimum line_minimize(const std::function<double(double)>& phi, double initial_step,
                          const LineSearchConfig& config) {
  constexpr double kInvPhi = 0.6180339887498949;
  LineMinimum out;
  const auto eval = [&](double t) {
    ++out.evaluations;
    return phi(t);
  };

  double step = std::max(initial_step, 10.0 * config.tolerance);
  double f_plus = eval(step);
  double lo = 0.0, hi = 0.0;
  if (f_plus >= 0.0) {
    const double f_minus = eval(-step);
    if (f_minus >= 0.0) {
      lo = -step;
      hi = step;
    } else {
      step = -step;
      f_plus = f_minus;
    }
  }
  if (lo == hi) {
    // Walk downhill from 0 through `step` until the function rises again.
    double prev = 0.0, cur = step, f_cur = f_plus;
    bool bracketed = false;
    for (int k = 0; k < config.max_expansions; ++k) {
      const double next = cur + config.growth * (cur - prev);
      const double f_next = eval(next);
      if (f_next >= f_cur) {
        lo = std::min(prev, next);
        hi = std::max(prev, next);
        bracketed = true;
        break;
      }
      prev = cur;
      cur = next;
      f_cur = f_next;
    }
    if (!bracketed) {
      out.t = cur;
      out.decrease = -f_cur;
      return out;
    }
  }

  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = eval(c), fd = eval(d);
  while (b - a > config.tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = eval(d);
    }
  }
  double t = fc <= fd ? c : d;
  double f_t = std::min(fc, fd);
  if (f_t >= 0.0) {
    // Never accept an uphill move.
    t = 0.0;
    f_t = 0.0;
  }
  out.t = t;
  out.decrease = -f_t;
  return out;
}

PowellResult powell_minimize(const Objective& objective, Eigen::VectorXd x0, const PowellConfig& config) {
  if (!(config.f_tol > 0.0) || !(config.x_tol > 0.0) || config.max_iters <= 0) {
    throw std::invalid_argument("Powell tolerances and iteration budget must be positive");
  }
  const Eigen::Index n = x0.size();
  PowellResult result;
  result.x = std::move(x0);
  result.f = objective.value(result.x);
  result.evaluations = 1;
  if (n == 0) {
    result.converged = true;
    return result;
  }

  const int reset_period = config.reset_period > 0 ? config.reset_period : static_cast<int>(2 * n);
  Eigen::MatrixXd dirs = Eigen::MatrixXd::Identity(n, n);
  std::vector<double> steps(n, config.line_search.initial_step);

  bool fresh = true;
  int since_reset = 0;
  for (int cycle = 1; cycle <= config.max_iters; ++cycle) {
    if (since_reset == reset_period) {
      dirs.setIdentity();
      std::fill(steps.begin(), steps.end(), config.line_search.initial_step);
      fresh = true;
      since_reset = 0;
    }
    ++since_reset;
    const Eigen::VectorXd x_start = result.x;
    const double f_start = result.f;
    double biggest = 0.0;
    Eigen::Index i_big = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd d = dirs.col(i);
      const LineMinimum m = line_minimize(objective.along(result.x, d), steps[i], config.line_search);
      result.evaluations += m.evaluations;
      if (m.t != 0.0) {
        result.x += m.t * d;
        steps[i] = std::max(std::abs(m.t), 10.0 * config.line_search.tolerance);
      }
      result.f -= m.decrease;
      if (m.decrease > biggest) {
        biggest = m.decrease;
        i_big = i;
      }
    }
    result.cycles = cycle;
    result.history.push_back(result.f);

    const double decrease = f_start - result.f;
    const double max_move = (result.x - x_start).cwiseAbs().maxCoeff();
    if (decrease < config.f_tol * (std::abs(result.f) + config.f_tol) || max_move < config.x_tol) {
      // A stalled cycle along the coordinate axes is a stationarity certificate
      // for a smooth term plus a coordinate-separable one; otherwise restart.
      if (fresh) {
        result.converged = true;
        break;
      }
      since_reset = reset_period;
      continue;
    }
    fresh = false;

    Eigen::VectorXd d_new = result.x - x_start;
    const double length = d_new.norm();
    if (length == 0.0) continue;
    // Extrapolated point 2 x - x_start, relative to the current value.
    const double f_ext = objective.along(result.x, d_new)(1.0);
    ++result.evaluations;
    if (f_ext < decrease) {
      const double a = decrease + f_ext;  // f_start - 2 f + f_ext
      const double b = decrease - biggest;
      const double c = decrease - f_ext;  // f_start - f_ext
      const double test = 2.0 * a * b * b - biggest * c * c;
      if (test < 0.0) {
        d_new /= length;
        const LineMinimum m = line_minimize(objective.along(result.x, d_new), length, config.line_search);
        result.evaluations += m.evaluations;
        result.x += m.t * d_new;
        result.f -= m.decrease;
        dirs.col(i_big) = dirs.col(n - 1);
        steps[i_big] = steps[n - 1];
        dirs.col(n - 1) = d_new;
        steps[n - 1] = std::max(std::abs(m.t), 10.0 * config.line_search.tolerance);
        result.history.back() = result.f;
      }
    }
  }
  return result;
}

}  // namespace hemi
