#include "sparqs/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace sparqs {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Pair {
  std::vector<double> s, y;
  double rho;
};

// H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ, seeded with h0·I (or the secant
// scale sᵀy/yᵀy when h0 is zero) at the first update.
void update_inverse_hessian(std::vector<double>& h, const Pair& p, double h0) {
  const std::size_t n = p.s.size();
  if (h.empty()) {
    const double gamma = h0 > 0.0 ? h0 : 1.0 / (p.rho * dot(p.y, p.y));
    h.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) h[i * n + i] = gamma;
  }
  std::vector<double> hy(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) hy[i] += h[i * n + j] * p.y[j];
  const double yhy = dot(p.y, hy);
  const double c = p.rho * (1.0 + p.rho * yhy);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h[i * n + j] += c * p.s[i] * p.s[j] - p.rho * (hy[i] * p.s[j] + p.s[i] * hy[j]);
}

struct Probe {
  double alpha, f, slope;
};

// Cubic through two (α, f, f') probes, minimizer kept at least 10% of the
// interval away from either end; bisection when the fit is unusable.
double cubic_step(const Probe& a, const Probe& b) {
  const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
  const double disc = d1 * d1 - a.slope * b.slope;
  const double lo = std::min(a.alpha, b.alpha), hi = std::max(a.alpha, b.alpha);
  const double margin = 0.1 * (hi - lo);
  double t = 0.5 * (a.alpha + b.alpha);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    const double c = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
    if (std::isfinite(c)) t = c;
  }
  return std::clamp(t, lo + margin, hi - margin);
}

// Strong Wolfe search along d from x (bracketing, then zoom). On success xt,
// gt and ft hold the accepted point. If the zoom runs out of trials it falls
// back to the best sufficient-decrease point seen, if any.
bool wolfe_search(const Objective& f, std::span<const double> x, double fx,
                  std::span<const double> g, std::span<const double> d, const BoxLbfgsOptions& o,
                  std::vector<double>& xt, std::vector<double>& gt, double& ft, std::size_t& evals) {
  const std::size_t n = x.size();
  const double slope0 = dot(g, d);
  std::vector<double> best_x, best_g;
  double best_f = fx;
  auto eval = [&](double alpha) {
    for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + alpha * d[i];
    ft = f(xt, gt);
    ++evals;
    const double s = dot(gt, d);
    if (std::isfinite(ft) && ft <= fx + o.armijo * alpha * slope0 && ft < best_f) {
      best_f = ft;
      best_x = xt;
      best_g = gt;
    }
    return Probe{alpha, std::isfinite(ft) ? ft : std::numeric_limits<double>::infinity(), s};
  };
  auto armijo_ok = [&](const Probe& p) { return p.f <= fx + o.armijo * p.alpha * slope0; };
  auto curvature_ok = [&](const Probe& p) { return std::abs(p.slope) <= -o.curvature * slope0; };

  std::size_t budget = o.max_backtracks;
  Probe prev{0.0, fx, slope0};
  Probe lo{}, hi{};
  bool bracketed = false;
  double alpha = 1.0;
  for (; budget > 0; --budget) {
    const Probe cur = eval(alpha);
    if (!armijo_ok(cur) || (prev.alpha > 0.0 && cur.f >= prev.f)) {
      lo = prev, hi = cur, bracketed = true;
      break;
    }
    if (curvature_ok(cur)) return true;
    if (cur.slope >= 0.0) {
      lo = cur, hi = prev, bracketed = true;
      break;
    }
    prev = cur;
    alpha *= 4.0;
  }
  if (bracketed) {
    for (; budget > 0; --budget) {
      const Probe cur = eval(std::isfinite(hi.f) ? cubic_step(lo, hi) : 0.5 * (lo.alpha + hi.alpha));
      if (!armijo_ok(cur) || cur.f >= lo.f) {
        hi = cur;
      } else {
        if (curvature_ok(cur)) return true;
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = cur;
      }
    }
  }
  if (best_x.empty()) return false;
  xt = std::move(best_x);
  gt = std::move(best_g);
  ft = best_f;
  return true;
}

}  // namespace

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::target_reached:
      return "target_reached";
    case StopReason::gradient_small:
      return "gradient_small";
    case StopReason::max_iterations:
      return "max_iterations";
    case StopReason::line_search_failed:
      return "line_search_failed";
    case StopReason::stalled:
      return "stalled";
  }
  return "unknown";
}

MinimizeResult minimize_box(const Objective& f, std::vector<double> x0,
                            std::span<const double> lower, std::span<const double> upper,
                            const BoxLbfgsOptions& opts, const Monitor& monitor) {
  const std::size_t n = x0.size();
  if (lower.size() != n || upper.size() != n)
    throw std::invalid_argument("minimize_box: bound vectors do not match the variable count");
  if (opts.line_search == LineSearch::strong_wolfe) {
    for (std::size_t i = 0; i < n; ++i)
      if (std::isfinite(lower[i]) || std::isfinite(upper[i]))
        throw std::invalid_argument("minimize_box: the Wolfe line search needs an unbounded problem");
  }
  auto project = [&](std::vector<double>& v) {
    for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i], lower[i], upper[i]);
  };

  MinimizeResult res;
  std::vector<double> x = std::move(x0);
  project(x);
  std::vector<double> g(n), gt(n), xt(n), d(n), q(n), pg(n);
  double fx = f(x, g);
  ++res.evaluations;

  std::deque<Pair> memory;
  // memory == 0: full inverse Hessian approximation, row-major n×n
  const bool dense = opts.memory == 0;
  std::vector<double> hinv;
  double last_step = 0.0;
  std::vector<double> alpha_buf;

  for (std::size_t iter = 0;; ++iter) {
    for (std::size_t i = 0; i < n; ++i) pg[i] = std::clamp(x[i] - g[i], lower[i], upper[i]) - x[i];
    const double pg_norm = inf_norm(pg);
    res.trace.push_back(fx);
    if (monitor) monitor({iter, fx, last_step, pg_norm});

    if (fx <= opts.stop_value) {
      res.reason = StopReason::target_reached;
      break;
    }
    if (pg_norm < opts.gradient_tolerance) {
      res.reason = StopReason::gradient_small;
      break;
    }
    if (opts.stall_window > 0 && iter >= opts.stall_window) {
      const double before = res.trace[iter - opts.stall_window];
      if (before - fx < opts.stall_reduction * std::abs(before)) {
        res.reason = StopReason::stalled;
        break;
      }
    }
    if (iter >= opts.max_iterations) {
      res.reason = StopReason::max_iterations;
      break;
    }

    // Variables sitting on a bound with the gradient pushing outward stay put.
    std::vector<bool> free(n, true);
    for (std::size_t i = 0; i < n; ++i) {
      if ((x[i] <= lower[i] && g[i] > 0.0) || (x[i] >= upper[i] && g[i] < 0.0)) free[i] = false;
    }

    bool accepted = false;
    double f_new = fx;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        memory.clear();
        hinv.clear();
      }
      for (std::size_t i = 0; i < n; ++i) q[i] = free[i] ? g[i] : 0.0;
      if (dense && !hinv.empty()) {
        // principal submatrix of a positive definite matrix: still descent
        for (std::size_t i = 0; i < n; ++i) {
          double acc = 0.0;
          if (free[i])
            for (std::size_t j = 0; j < n; ++j) acc += hinv[i * n + j] * q[j];
          d[i] = -acc;
        }
        if (dot(d, g) >= 0.0) continue;
      } else if (memory.empty()) {
        const double gmax = inf_norm(q);
        const double scale = gmax > 0.0 ? opts.initial_step / gmax : 1.0;
        for (std::size_t i = 0; i < n; ++i) d[i] = -scale * q[i];
      } else {
        alpha_buf.assign(memory.size(), 0.0);
        for (std::size_t k = memory.size(); k-- > 0;) {
          alpha_buf[k] = memory[k].rho * dot(memory[k].s, q);
          for (std::size_t i = 0; i < n; ++i) q[i] -= alpha_buf[k] * memory[k].y[i];
        }
        const Pair& last = memory.back();
        const double gamma = opts.h0 > 0.0 ? opts.h0 : dot(last.s, last.y) / dot(last.y, last.y);
        for (std::size_t i = 0; i < n; ++i) q[i] *= gamma;
        for (std::size_t k = 0; k < memory.size(); ++k) {
          const double beta = memory[k].rho * dot(memory[k].y, q);
          for (std::size_t i = 0; i < n; ++i) q[i] += (alpha_buf[k] - beta) * memory[k].s[i];
        }
        for (std::size_t i = 0; i < n; ++i) d[i] = free[i] ? -q[i] : 0.0;
        if (dot(d, g) >= 0.0) continue;  // not a descent direction; retry from scratch
      }

      if (opts.line_search == LineSearch::strong_wolfe) {
        accepted = wolfe_search(f, x, fx, g, d, opts, xt, gt, f_new, res.evaluations);
        continue;
      }
      double alpha = 1.0;
      for (std::size_t bt = 0; bt <= opts.max_backtracks; ++bt, alpha *= opts.backtrack) {
        for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + alpha * d[i];
        project(xt);
        double decrease = 0.0;
        for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (xt[i] - x[i]);
        if (!(decrease < 0.0)) continue;
        const double ft = f(xt, gt);
        ++res.evaluations;
        if (std::isfinite(ft) && ft <= fx + opts.armijo * decrease) {
          f_new = ft;
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      res.reason = StopReason::line_search_failed;
      break;
    }

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = xt[i] - x[i];
      p.y[i] = gt[i] - g[i];
    }
    const double sy = dot(p.s, p.y);
    last_step = inf_norm(p.s);
    if (sy > 1e-12 * std::sqrt(dot(p.s, p.s) * dot(p.y, p.y)) && sy > 0.0) {
      p.rho = 1.0 / sy;
      if (dense) update_inverse_hessian(hinv, p, opts.h0);
      memory.push_back(std::move(p));
      if (memory.size() > opts.memory) memory.pop_front();
    }
    std::swap(x, xt);
    std::swap(g, gt);
    fx = f_new;
    ++res.iterations;
  }

  res.x = std::move(x);
  res.value = fx;
  return res;
}

}  // namespace sparqs
