#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "fieldent/errors.hpp"

namespace fieldent {

struct FitResult {
  double exponent = 0.0;
  double prefactor = 0.0;
  std::optional<double> offset;
  double r_squared = 0.0;
  std::pair<double, double> window{0.0, 0.0};
};

namespace detail {

struct LinFit {
  double slope, intercept, sse, r2;
};

inline LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += (long double)x[i] * x[i];
    sxy += (long double)x[i] * y[i];
  }
  const long double det = (long double)n * sxx - sx * sx;
  if (std::abs((double)det) < 1e-14 * (double)(n * sxx + 1.0))
    throw invalid_state_error("linear fit: degenerate design matrix");
  const double slope = (double)(((long double)n * sxy - sx * sy) / det);
  const double intercept = (double)((sxx * sy - sx * sxy) / det);
  long double sse = 0, sst = 0;
  const double ybar = (double)(sy / (long double)n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (slope * x[i] + intercept);
    sse += (long double)r * r;
    const double t = y[i] - ybar;
    sst += (long double)t * t;
  }
  const double r2 = sst > 0 ? std::max(0.0, 1.0 - (double)(sse / sst)) : 1.0;
  return {slope, intercept, (double)sse, r2};
}

}  // namespace detail

// Least-squares power law y = c*x^p in log-log coordinates. With
// `estimate_offset`, profiles y = y_inf + c*x^p over the offset first
// (golden-section on the profiled SSE).
inline FitResult fit_power_law(const std::vector<std::pair<double, double>>& points,
                               bool estimate_offset = false) {
  if (points.size() < 3)
    throw invalid_state_error("fit_power_law: need at least 3 points");
  std::vector<double> xs, ys;
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
  for (auto& [x, y] : points) {
    if (!(x > 0.0)) throw invalid_state_error("fit_power_law: abscissa must be positive");
    xs.push_back(x);
    ys.push_back(y);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }

  // profile objective: 1 - r^2 in log-log space. (A raw-SSE profile is
  // degenerate: y_inf -> -inf flattens the data and the SSE with it.)
  auto sse_at = [&](double y_inf) {
    std::vector<double> lx(xs.size()), ly(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double d = ys[i] - y_inf;
      if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
      lx[i] = std::log(xs[i]);
      ly[i] = std::log(d);
    }
    return 1.0 - detail::linear_fit(lx, ly).r2;
  };

  double y_inf = 0.0;
  if (estimate_offset) {
    const double span = std::max(ymax - ymin, std::abs(ymin) + 1e-30);
    double lo = ymin - 10.0 * span;
    double hi = ymin - 1e-12 * span;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = sse_at(c), fd = sse_at(d);
    for (int it = 0; it < 200; ++it) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = sse_at(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + gr * (hi - lo);
        fd = sse_at(d);
      }
    }
    y_inf = 0.5 * (lo + hi);
    if (sse_at(0.0) <= sse_at(y_inf)) y_inf = 0.0;  // offset not supported by data
  }

  std::vector<double> lx(xs.size()), ly(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = ys[i] - y_inf;
    if (!(d > 0.0))
      throw invalid_state_error("fit_power_law: non-positive data after offset subtraction");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(d);
  }
  auto lf = detail::linear_fit(lx, ly);
  FitResult out;
  out.exponent = lf.slope;
  out.prefactor = std::exp(lf.intercept);
  if (estimate_offset) out.offset = y_inf;
  out.r_squared = lf.r2;
  out.window = {xmin, xmax};
  return out;
}

// Fits S = a + b*(log Lambda)^p: grid over p with an inner linear solve,
// then golden-section refinement around the best grid point.
inline FitResult fit_log_power(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw invalid_state_error("fit_log_power: need at least 3 points");
  std::vector<double> lx, ys;
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
  for (auto& [L, S] : points) {
    if (!(L > 0.0)) throw invalid_state_error("fit_log_power: cutoff must be positive");
    lx.push_back(std::log(L));
    ys.push_back(S);
    xmin = std::min(xmin, L);
    xmax = std::max(xmax, L);
  }
  if (std::log10(xmax / xmin) < 2.9995)
    throw invalid_state_error("fit_log_power: cutoffs must span at least 3 decades");

  struct Sol {
    double a, b, sse;
  };
  auto solve_at = [&](double p) -> Sol {
    const std::size_t n = lx.size();
    long double s1 = (long double)n, sx = 0, sxx = 0, sy = 0, sxy = 0;
    std::vector<double> X(n);
    for (std::size_t i = 0; i < n; ++i) {
      X[i] = std::pow(lx[i], p);
      sx += X[i];
      sxx += (long double)X[i] * X[i];
      sy += ys[i];
      sxy += (long double)X[i] * ys[i];
    }
    const long double det = s1 * sxx - sx * sx;
    if (std::abs((double)det) < 1e-13 * (double)(s1 * sxx + 1.0))
      throw invalid_state_error("fit_log_power: degenerate design matrix");
    const double b = (double)((s1 * sxy - sx * sy) / det);
    const double a = (double)((sxx * sy - sx * sxy) / det);
    long double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys[i] - (a + b * X[i]);
      sse += (long double)r * r;
    }
    return {a, b, (double)sse};
  };

  double best_p = 0.5, best_sse = std::numeric_limits<double>::infinity();
  for (double p = 0.5; p <= 5.0 + 1e-12; p += 0.01) {
    const double s = solve_at(p).sse;
    if (s < best_sse) {
      best_sse = s;
      best_p = p;
    }
  }
  double lo = std::max(0.5, best_p - 0.02), hi = std::min(5.0, best_p + 0.02);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = solve_at(c).sse, fd = solve_at(d).sse;
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = solve_at(c).sse;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = solve_at(d).sse;
    }
  }
  const double p = 0.5 * (lo + hi);
  auto sol = solve_at(p);
  long double sst = 0, sy = 0;
  for (double y : ys) sy += y;
  const double ybar = (double)(sy / (long double)ys.size());
  for (double y : ys) sst += (long double)(y - ybar) * (y - ybar);
  FitResult out;
  out.exponent = p;
  out.prefactor = sol.b;
  out.offset = sol.a;
  out.r_squared = sst > 0 ? std::max(0.0, 1.0 - sol.sse / (double)sst) : 1.0;
  out.window = {xmin, xmax};
  return out;
}

}  // namespace fieldent
