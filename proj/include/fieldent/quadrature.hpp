#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "fieldent/errors.hpp"

namespace fieldent {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
};

// Panel edges at top*2^-j, j = 1..levels. Guarantees structure at any scale
// down to ~1e-15*top is sampled before refinement starts.
inline std::vector<double> dyadic_seeds(double top, int levels) {
  std::vector<double> s;
  s.reserve((std::size_t)levels);
  double x = top;
  for (int j = 0; j < levels; ++j) {
    x *= 0.5;
    s.push_back(x);
  }
  return s;
}

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss (QUADPACK constants).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value;
  double error;
};

inline bool operator<(const Panel& x, const Panel& y) {
  if (x.error != y.error) return x.error < y.error;
  if (x.a != y.a) return x.a > y.a;
  return x.b > y.b;
}

template <class F>
Panel gk15(const F& f, double a, double b, std::int64_t& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fk[15];
  for (int i = 0; i < 7; ++i) {
    fk[i] = f(c - h * kGK15Nodes[i]);
    fk[14 - i] = f(c + h * kGK15Nodes[i]);
  }
  fk[7] = f(c);
  evals += 15;
  long double sk = 0.0L, sg = 0.0L;
  for (int i = 0; i < 8; ++i) {
    const double pair = (i < 7) ? fk[i] + fk[14 - i] : fk[7];
    sk += (long double)kGK15WeightsK[i] * pair;
    if (i % 2 == 1) sg += (long double)kGK15WeightsG[i / 2] * pair;
  }
  const double ik = (double)(sk * h);
  const double ig = (double)(sg * h);
  double err = std::abs(ik - ig);
  err = std::min(err, std::pow(200.0 * err, 1.5) + 1e-300);
  return Panel{a, b, ik, err};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod on [a,b]. Deterministic: worst-panel-first
// with a total tie order and a fixed left-to-right final summation.
// `seed_edges` may add interior panel boundaries (out-of-range entries ignored).
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double tol_abs,
                                    int max_panels = 2000,
                                    const std::vector<double>& seed_edges = {}) {
  QuadratureResult out;
  if (a == b) return out;
  std::vector<double> edges{a, b};
  for (double e : seed_edges)
    if (e > a && e < b) edges.push_back(e);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<detail::Panel> queue;
  std::vector<detail::Panel> done;  // panels too narrow to split further
  long double err = 0.0L;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto p = detail::gk15(f, edges[i], edges[i + 1], out.evaluations);
    err += p.error;
    queue.push(p);
  }
  int panels = (int)edges.size() - 1;
  while ((double)err > tol_abs && panels < max_panels && !queue.empty()) {
    auto worst = queue.top();
    queue.pop();
    if (worst.b - worst.a < 1e-15 * (std::abs(worst.a) + std::abs(worst.b)) ||
        worst.b - worst.a < 1e-305) {
      done.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15(f, worst.a, mid, out.evaluations);
    auto right = detail::gk15(f, mid, worst.b, out.evaluations);
    err += (long double)left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(),
            [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
  long double v = 0.0L, e = 0.0L;
  for (const auto& p : done) {
    v += p.value;
    e += p.error;
  }
  out.value = (double)v;
  out.error_estimate = (double)e;
  return out;
}

struct SemiInfiniteOptions {
  double tol = 1e-9;       // relative to abs_floor + |value|
  int max_panels = 4000;   // adaptive budget on the finite part
  int max_doublings = 64;  // search budget for the tail split point
  int seed_levels = 48;    // dyadic seeding depth of [0, 4*Omega]
  // absolute term of the tolerance target; 0 requests purely relative
  // accuracy (used for structurally small integrals)
  double abs_floor = 1.0;
};

// Integrates f over (0, inf). The finite part is adaptive GK on [0, 4*Omega];
// the tail is detected from samples at Omega, 2*Omega, 4*Omega: once the decay
// is algebraic ~ c/w^s (s > 1), the analytic remainder f(4*Omega)*(4*Omega)/(s-1)
// is attached. The split point doubles until the tail model error is negligible
// at the requested tolerance. Endpoints are never evaluated.
template <class F>
QuadratureResult integrate_semi_infinite(const F& f, SemiInfiniteOptions opt = {}) {
  QuadratureResult out;
  double omega = 1.0;
  double tail = 0.0, tail_err = 0.0;
  bool accepted = false;
  double coarse = 0.0;
  for (int iter = 0; iter < opt.max_doublings; ++iter) {
    const double f1 = f(omega), f2 = f(2.0 * omega), f3 = f(4.0 * omega);
    out.evaluations += 3;
    const double a1 = std::abs(f1), a2 = std::abs(f2), a3 = std::abs(f3);
    if (a1 < 1e-300 && a2 < 1e-300 && a3 < 1e-300) {
      accepted = true;
      break;
    }
    const bool same_sign = (f1 > 0) == (f2 > 0) && (f2 > 0) == (f3 > 0);
    if (same_sign && a1 > a2 && a2 > a3 && a3 > 0.0) {
      const double s1 = std::log2(a1 / a2);
      const double s2 = std::log2(a2 / a3);
      if (s2 > 1.05) {
        tail = f3 * (4.0 * omega) / (s2 - 1.0);
        tail_err = std::abs(tail) * (3.0 * std::abs(s1 - s2) + 1e-12);
        QuadratureResult c = integrate_adaptive(
            f, 0.0, 4.0 * omega,
            1e-3 * (std::min(opt.abs_floor, 1.0) + std::abs(tail)) + 1e-280, 120,
            dyadic_seeds(4.0 * omega, 20));
        out.evaluations += c.evaluations;
        coarse = c.value;
        if (tail_err <=
            0.25 * opt.tol * (opt.abs_floor + std::abs(coarse) + std::abs(tail))) {
          accepted = true;
          break;
        }
      }
    }
    omega *= 2.0;
  }
  if (!accepted)
    throw numerical_error(
        "integrate_semi_infinite: no algebraic tail found (partial value attached)",
        coarse + tail);
  const double tol_abs =
      0.75 * opt.tol * (opt.abs_floor + std::abs(coarse) + std::abs(tail));
  QuadratureResult fin =
      integrate_adaptive(f, 0.0, 4.0 * omega, tol_abs, opt.max_panels,
                         dyadic_seeds(4.0 * omega, opt.seed_levels));
  out.evaluations += fin.evaluations;
  out.value = fin.value + tail;
  out.error_estimate = fin.error_estimate + tail_err;
  return out;
}

}  // namespace fieldent
