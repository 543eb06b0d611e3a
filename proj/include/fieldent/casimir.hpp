#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fieldent/errors.hpp"
#include "fieldent/plates.hpp"

// Numerical evaluator of the spectral TrLog formula for the distance-dependent
// entropy S_R(A,B) = S(AUB) - S(A) - S(B) of Gaussian bodies, with
//   K_X = (Gamma_X - 1/4) / (x - 1/4 + i varsigma),
//   T(x) = TrLog[ 1 - (1-K_A)^-1 (K_A K_B + K_AUB - K_A - K_B) (1-K_B)^-1 ].
//
// The weight w(x) = log((sqrt x + 1/2)/(sqrt x - 1/2))/(2 sqrt x) equals
// d/dx h(2 sqrt x), and T(x) reduces to
//   log det(x - Gamma_AUB) - log(x - gamma_A) - log(x - gamma_B),
// which is analytic off the real axis. A two-sided vertical line at
// Re x = 1/2 therefore closes into the right half-plane and evaluates to
// zero; the formula's content lives on the branch cut of w across (0, 1/4],
// where disc w = i pi / sqrt(x). Wrapping that cut gives the convergent form
//   S_R = int_0^{1/4} dx/(2 sqrt x) T(x),
// which is what `value` reports (substituting x = u^2 makes the integrand
// smooth). The literal vertical-line evaluation is kept as a diagnostic.
namespace fieldent {

// Gamma = G.H products embedded on the union of body sites: a body acts as
// the decoupled value 1/4 outside its own support.
struct BodyGammaSet {
  Eigen::Matrix2d gamma_A;
  Eigen::Matrix2d gamma_B;
  Eigen::Matrix2d gamma_AB;

  void validate() const {
    auto check = [](const Eigen::Matrix2d& g, const char* name) {
      Eigen::EigenSolver<Eigen::Matrix2d> es(g);
      for (int i = 0; i < 2; ++i)
        if (es.eigenvalues()[i].real() < 0.25 - 1e-9)
          throw invalid_state_error(std::string("body gamma set: ") + name +
                                    " has eigenvalue below 1/4");
    };
    check(gamma_A, "Gamma_A");
    check(gamma_B, "Gamma_B");
    check(gamma_AB, "Gamma_AUB");
  }
};

struct ContourSpec {
  double x_max = 4096.0;  // height of the diagnostic vertical contour
  int nodes = 64;         // quadrature nodes on the branch-cut segment
  // i*varsigma offset in the K denominators. On the branch-cut segment the
  // integrand is real and nonsingular, so no regulator is needed; a nonzero
  // value shifts the result by O(varsigma) and the shift is reported through
  // imag_residual.
  double varsigma = 0.0;
};

struct ContourResult {
  double value = 0.0;           // branch-cut evaluation of the formula
  double imag_residual = 0.0;   // |imaginary part| left by the i*varsigma offset
  double vertical_line_value = 0.0;  // literal two-sided line integral (diagnostic)
  double x_max_used = 0.0;
  int nodes_used = 0;
};

inline BodyGammaSet body_gamma_set(const PlateSystem& sys, double kp = 0.0,
                                   const PlateOptions& opt = {}) {
  auto p = correlator_parts(sys, kp, opt);
  const double gamma_single = p.g_single * p.h_single;
  Eigen::Matrix2d g, h;
  g << p.g_single + p.dg_d, p.g_o, p.g_o, p.g_single + p.dg_d;
  h << p.h_single + p.dh_d, p.h_o, p.h_o, p.h_single + p.dh_d;
  BodyGammaSet set;
  set.gamma_A = Eigen::Vector2d(gamma_single, 0.25).asDiagonal();
  set.gamma_B = Eigen::Vector2d(0.25, gamma_single).asDiagonal();
  set.gamma_AB = g * h;
  return set;
}

// Direct difference S(AUB) - S(A) - S(B); the authoritative value.
inline double s_r_direct(const PlateSystem& sys, const PlateOptions& opt = {}) {
  return detail::entropy_pieces(correlator_parts(sys, 0.0, opt)).total;
}

namespace detail {

using C2 = Eigen::Matrix2cd;
using Cplx = std::complex<double>;

inline Cplx trlog_argument_logdet(const BodyGammaSet& set, Cplx x, double varsigma) {
  const C2 id = C2::Identity();
  const Cplx den = x - 0.25 + Cplx(0.0, varsigma);
  if (std::abs(den) < 1e-300)
    throw numerical_error("s_r_contour: denominator vanished; increase varsigma");
  C2 ka = (set.gamma_A.cast<Cplx>() - 0.25 * id) / den;
  C2 kb = (set.gamma_B.cast<Cplx>() - 0.25 * id) / den;
  C2 kab = (set.gamma_AB.cast<Cplx>() - 0.25 * id) / den;
  C2 one_m_ka = id - ka;
  C2 one_m_kb = id - kb;
  if (std::abs(one_m_ka.determinant()) < 1e-13 || std::abs(one_m_kb.determinant()) < 1e-13)
    throw numerical_error("s_r_contour: (1-K) singular on the contour; increase varsigma");
  C2 mnum = ka * kb + kab - ka - kb;
  C2 m = id - one_m_ka.inverse() * mnum * one_m_kb.inverse();
  const Cplx det = m.determinant();
  if (std::abs(det) < 1e-300)
    throw numerical_error("s_r_contour: TrLog argument singular on the contour");
  return std::log(det);
}

// Keeps log det continuous along a node sequence (branch tracking).
struct BranchTracker {
  bool has_prev = false;
  double prev_imag = 0.0;
  Cplx track(Cplx logdet) {
    if (has_prev) {
      while (logdet.imag() - prev_imag > std::numbers::pi)
        logdet -= Cplx(0.0, 2.0 * std::numbers::pi);
      while (logdet.imag() - prev_imag < -std::numbers::pi)
        logdet += Cplx(0.0, 2.0 * std::numbers::pi);
    }
    has_prev = true;
    prev_imag = logdet.imag();
    return logdet;
  }
};

inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign((std::size_t)n, 0.0);
  w.assign((std::size_t)n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[(std::size_t)i] = -t;
    x[(std::size_t)(n - 1 - i)] = t;
    w[(std::size_t)i] = 2.0 / ((1.0 - t * t) * pp * pp);
    w[(std::size_t)(n - 1 - i)] = w[(std::size_t)i];
  }
}

inline Cplx cut_integral(const BodyGammaSet& set, int nodes, double varsigma) {
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  BranchTracker tracker;
  Cplx total = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double u = 0.25 * (x[(std::size_t)i] + 1.0);  // u in (0, 1/2), s = u^2
    const double wu = 0.25 * w[(std::size_t)i];
    total += wu * tracker.track(trlog_argument_logdet(set, Cplx(u * u, 0.0), varsigma));
  }
  return total;
}

inline double vertical_line(const BodyGammaSet& set, double x_max, int nodes_per_octave,
                            double varsigma) {
  std::vector<double> x, w;
  gauss_legendre(std::max(8, nodes_per_octave), x, w);
  const double wstar = 0.5;  // contour real part
  Cplx total = 0.0;
  double lo = 0.0, hi = 0.0625;
  while (lo < x_max) {
    hi = std::min(hi, x_max);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x[i];
      const double wt = 0.5 * (hi - lo) * w[i];
      for (double sgn : {1.0, -1.0}) {
        const Cplx xx(wstar, sgn * t);
        const Cplx sx = std::sqrt(xx);
        const Cplx weight = std::log((sx + 0.5) / (sx - 0.5)) / (2.0 * sx);
        const Cplx f = weight * trlog_argument_logdet(set, xx, varsigma);
        total += wt * f * Cplx(0.0, 1.0);  // dx = i dt along the upward line
      }
    }
    lo = hi;
    hi *= 2.0;
  }
  return (-total / std::numbers::pi).real();
}

}  // namespace detail

inline ContourResult s_r_contour(const BodyGammaSet& set, const ContourSpec& spec = {}) {
  set.validate();
  if (spec.nodes < 16) throw invalid_state_error("s_r_contour: need at least 16 nodes");
  ContourResult out;
  int nodes = spec.nodes;
  detail::Cplx val = detail::cut_integral(set, nodes, spec.varsigma);
  for (int round = 0; round < 4; ++round) {
    detail::Cplx refined = detail::cut_integral(set, 2 * nodes, spec.varsigma);
    const double change = std::abs(refined - val);
    val = refined;
    nodes *= 2;
    if (change <= 0.005 * std::abs(val) + 1e-300) break;
  }
  out.value = val.real();
  out.imag_residual = std::abs(val.imag());
  out.nodes_used = nodes;
  out.x_max_used = spec.x_max;
  out.vertical_line_value = detail::vertical_line(set, spec.x_max, 24, spec.varsigma);
  return out;
}

}  // namespace fieldent
