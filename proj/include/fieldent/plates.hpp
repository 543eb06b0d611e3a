#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "fieldent/constants.hpp"
#include "fieldent/errors.hpp"
#include "fieldent/fitting.hpp"
#include "fieldent/gaussian.hpp"
#include "fieldent/quadrature.hpp"

// Lattice toy model of two thin plates: a 1-D chain carrying the field, with
// a pinned matter oscillator on each body site (separation L), transverse
// momentum k_perp as a spectator quantum number for d_perp > 0.
//
// The separation-dependent parts of the correlators are computed as direct
// integrals of the cross-propagator beta (never as differences of two large
// quadratures), so S(L) - S(ref) is accurate down to ~1e-18 even though the
// entropies themselves are O(0.1).
namespace fieldent {

struct PlateSystem {
  int L = 10;          // site separation, lattice units
  double omega_0 = 3.0;  // pinning frequency
  double omega_p = 0.1;  // coupling
  int d_perp = 0;        // transverse dimension, 0..2

  void validate() const {
    if (L < 1) throw invalid_state_error("plates: L must be >= 1");
    if (!(omega_p >= 0.0) || !(omega_0 > omega_p))
      throw invalid_state_error("plates: need omega_0 > omega_p >= 0");
    if (d_perp < 0 || d_perp > 2) throw invalid_state_error("plates: d_perp in {0,1,2}");
  }
};

// Free Green's function of the 1-D chain, G0(n,m) = e^{-q|n-m|}/(2 sinh q),
// cosh q = 1 + (w^2 + kp^2)/2. Stable at small arguments via log1p.
struct LatticePropagator {
  static double q(double w, double kp) {
    const double x = 0.5 * (w * w + kp * kp);
    return std::log1p(x + std::sqrt(x * (2.0 + x)));
  }
  static double sinh_q(double w, double kp) {
    const double x = 0.5 * (w * w + kp * kp);
    return std::sqrt(x * (2.0 + x));
  }
  static double value(int dist, double w, double kp) {
    return std::exp(-q(w, kp) * dist) / (2.0 * sinh_q(w, kp));
  }
};

// Effective-action kernel on the body sites, M = ((w^2+w0^2)/8pi^2) I + wp^2 w^2 G0^B.
inline Eigen::Matrix2d kernel_matrix(const PlateSystem& sys, double w, double kp = 0.0) {
  sys.validate();
  const double diag = (w * w + sys.omega_0 * sys.omega_0) / kPiSq8 +
                      sys.omega_p * sys.omega_p * w * w * LatticePropagator::value(0, w, kp);
  const double off =
      sys.omega_p * sys.omega_p * w * w * LatticePropagator::value(sys.L, w, kp);
  Eigen::Matrix2d m;
  m << diag, off, off, diag;
  return m;
}

struct PlateOptions {
  double tol = 1e-11;    // per-correlator quadrature tolerance
  int ref_factor = 8;    // far reference at ref_factor * max(L)
};

// Correlator building blocks at fixed k_perp:
//   g_single, h_single : single-body (decoupled) values;
//   dg_d, dh_d         : separation-dependent diagonal shifts, O(beta^2);
//   g_o, h_o           : off-diagonal entries, O(beta).
struct CorrelatorParts {
  double g_single = 0.0, h_single = 0.0;
  double dg_d = 0.0, dh_d = 0.0;
  double g_o = 0.0, h_o = 0.0;
  double err = 0.0;
  std::int64_t evaluations = 0;
};

namespace detail {

struct AlphaBeta {
  double a, b;
};

inline AlphaBeta plate_ab(const PlateSystem& sys, double w, double kp) {
  const double sh = 2.0 * LatticePropagator::sinh_q(w, kp);
  const double ex = std::exp(-LatticePropagator::q(w, kp) * sys.L);
  const double w2 = w * w;
  return {(w2 + sys.omega_0 * sys.omega_0) / kPiSq8 + sys.omega_p * sys.omega_p * w2 / sh,
          sys.omega_p * sys.omega_p * w2 * ex / sh};
}

}  // namespace detail

inline CorrelatorParts single_body_parts(const PlateSystem& sys, double kp,
                                         const PlateOptions& opt = {}) {
  sys.validate();
  SemiInfiniteOptions so;
  so.tol = opt.tol;
  const double c1 = 1.0 / (2.0 * std::numbers::pi);
  const double c2 = 1.0 / (32.0 * std::pow(std::numbers::pi, 5));
  CorrelatorParts out;
  auto alpha = [&](double w) { return detail::plate_ab(sys, w, kp).a; };
  auto g = integrate_semi_infinite([&](double w) { return c1 / alpha(w); }, so);
  auto h = integrate_semi_infinite(
      [&](double w) { return -c2 * (w * w / alpha(w) - kPiSq8); }, so);
  out.g_single = g.value;
  out.h_single = h.value;
  out.err = g.error_estimate + h.error_estimate;
  out.evaluations = g.evaluations + h.evaluations;
  return out;
}

inline CorrelatorParts correlator_parts(const PlateSystem& sys, double kp,
                                        const PlateOptions& opt = {}) {
  CorrelatorParts out = single_body_parts(sys, kp, opt);
  SemiInfiniteOptions so;
  so.tol = opt.tol;
  so.abs_floor = 0.0;  // the beta-dependent parts are structurally small
  const double c1 = 1.0 / (2.0 * std::numbers::pi);
  const double c2 = 1.0 / (32.0 * std::pow(std::numbers::pi, 5));
  auto ab = [&](double w) { return detail::plate_ab(sys, w, kp); };
  auto dg = integrate_semi_infinite(
      [&](double w) {
        auto [a, b] = ab(w);
        return c1 * b * b / (a * (a * a - b * b));
      },
      so);
  auto dh = integrate_semi_infinite(
      [&](double w) {
        auto [a, b] = ab(w);
        return -c2 * w * w * b * b / (a * (a * a - b * b));
      },
      so);
  auto go = integrate_semi_infinite(
      [&](double w) {
        auto [a, b] = ab(w);
        return -c1 * b / (a * a - b * b);
      },
      so);
  auto ho = integrate_semi_infinite(
      [&](double w) {
        auto [a, b] = ab(w);
        return c2 * w * w * b / (a * a - b * b);
      },
      so);
  out.dg_d = dg.value;
  out.dh_d = dh.value;
  out.g_o = go.value;
  out.h_o = ho.value;
  out.err += dg.error_estimate + dh.error_estimate + go.error_estimate + ho.error_estimate;
  out.evaluations += dg.evaluations + dh.evaluations + go.evaluations + ho.evaluations;
  return out;
}

// Two-point function of the matter field, Eq.-(13)-style 2x2 matrix.
inline Eigen::Matrix2d psi_correlator(const PlateSystem& sys, double kp = 0.0,
                                      const PlateOptions& opt = {}) {
  auto p = correlator_parts(sys, kp, opt);
  Eigen::Matrix2d g;
  g << p.g_single + p.dg_d, p.g_o, p.g_o, p.g_single + p.dg_d;
  return g;
}

// Conjugate-momentum correlator (point-split subtraction already applied).
inline Eigen::Matrix2d pi_correlator(const PlateSystem& sys, double kp = 0.0,
                                     const PlateOptions& opt = {}) {
  auto p = correlator_parts(sys, kp, opt);
  Eigen::Matrix2d h;
  h << p.h_single + p.dh_d, p.h_o, p.h_o, p.h_single + p.dh_d;
  return h;
}

struct SymplecticPair {
  double lambda_plus, lambda_minus;  // descending
  double mu_plus, mu_minus;          // lattice convention mu = 2 lambda
};

namespace detail {

inline SymplecticPair pair_from_parts(const CorrelatorParts& p) {
  const double gd = p.g_single + p.dg_d, hd = p.h_single + p.dh_d;
  const double l1 = (gd + p.g_o) * (hd + p.h_o);
  const double l2 = (gd - p.g_o) * (hd - p.h_o);
  if (!(l1 > 0.0) || !(l2 > 0.0))
    throw numerical_error("plates: GH product not positive", 0.0, std::min(l1, l2));
  SymplecticPair sp;
  sp.lambda_plus = std::sqrt(std::max(l1, l2));
  sp.lambda_minus = std::sqrt(std::min(l1, l2));
  sp.mu_plus = 2.0 * sp.lambda_plus;
  sp.mu_minus = 2.0 * sp.lambda_minus;
  if (sp.mu_minus < 1.0 - 1e-8)
    throw unphysical_state_error("plates: symplectic value below 1", sp.mu_minus);
  return sp;
}

}  // namespace detail

inline SymplecticPair symplectic_pair(const PlateSystem& sys, double kp = 0.0,
                                      const PlateOptions& opt = {}) {
  return detail::pair_from_parts(correlator_parts(sys, kp, opt));
}

// Printed large-L asymptotic coefficients and the two limiting expansions of
// theta = A_G A_H / 64 pi^6. Evaluated for reporting and shape checks only;
// these closed forms are known to disagree with direct evaluation of the
// correlators in overall normalization (see README notes) and are never used
// in the entropy pipeline.
struct AsymptoticCoefficients {
  double A_G, A_H, theta;
  double theta_pinned;  // 1/4 + 8 pi wp^2/w0^3 - 8 pi^2 wp^2/w0^4
  double theta_weak;    // 1/4 + 2 pi wp log(4/(e wp)) at w0 = wp
};

inline AsymptoticCoefficients theta_asymptotics(const PlateSystem& sys) {
  sys.validate();
  const double w0 = sys.omega_0, wp = sys.omega_p;
  if (!(w0 > 2.0))
    throw std::domain_error("theta_asymptotics: requires omega_0 > 2");
  const double pi = std::numbers::pi;
  const double root = std::sqrt(w0 * w0 - 4.0);
  const double acv = std::acos(2.0 / w0);
  AsymptoticCoefficients out;
  out.A_G = 4.0 * std::pow(pi, 3) / w0 -
            32.0 * std::pow(pi, 4) * wp * wp * (w0 * w0 * acv - 2.0 * root) /
                (w0 * w0 * std::pow(w0 * w0 - 4.0, 1.5));
  out.A_H = w0 / (4.0 * pi) + 32.0 * std::pow(pi, 4) * wp * wp *
                                  (2.0 * root + (w0 * w0 - 8.0) * acv) /
                                  std::pow(w0 * w0 - 4.0, 1.5);
  out.theta = out.A_G * out.A_H / (64.0 * std::pow(pi, 6));
  out.theta_pinned = 0.25 + 8.0 * pi * wp * wp / std::pow(w0, 3) -
                     8.0 * pi * pi * wp * wp / std::pow(w0, 4);
  out.theta_weak = 0.25 + 2.0 * pi * wp * std::log(4.0 / (std::numbers::e * wp));
  return out;
}

struct PlateRecord {
  int L = 0;
  int k_perp_dim = 0;
  double S = 0.0;            // total entropy h(mu+) + h(mu-) at k_perp = 0
  double S_R = 0.0;          // S - S(reference separation); transverse-integrated for d_perp > 0
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double err_bound = 0.0;
  double s_r_split = 0.0;    // level-splitting contribution to S_R (O(wp^2), ~L^-4, negative)
  double s_r_scatter = 0.0;  // diagonal multiple-scattering contribution (O(wp^4), ~L^-3, positive)
};

struct PlateScan {
  std::vector<PlateRecord> records;
  FitResult fit;          // power law on |S_R|
  bool s_r_positive = true;
  int L_ref = 0;
};

namespace detail {

struct EntropyPieces {
  double total;  // S(L) - S_iso
  double split;  // h(mu+) + h(mu-) - 2 h(mu_bar)
  double scatter;  // 2 h(mu_bar) - 2 h(mu_iso)
  SymplecticPair pair;
};

inline EntropyPieces entropy_pieces(const CorrelatorParts& p) {
  EntropyPieces e;
  e.pair = pair_from_parts(p);
  const double mu_iso = 2.0 * std::sqrt(p.g_single * p.h_single);
  const double mu_bar =
      2.0 * std::sqrt((p.g_single + p.dg_d) * (p.h_single + p.dh_d));
  const double hp = entropy_h_from_delta(e.pair.mu_plus - 1.0);
  const double hm = entropy_h_from_delta(e.pair.mu_minus - 1.0);
  const double hb = entropy_h_from_delta(mu_bar - 1.0);
  const double hi = entropy_h_from_delta(mu_iso - 1.0);
  e.split = hp + hm - 2.0 * hb;
  e.scatter = 2.0 * (hb - hi);
  e.total = e.split + e.scatter;
  return e;
}

}  // namespace detail

// Entropy and its distance-dependent part versus separation at d_perp = 0.
// S_ref is evaluated at ref_factor * max(L) through the same decomposition.
inline PlateScan entropy_vs_L(PlateSystem sys, const std::vector<int>& Ls,
                              const PlateOptions& opt = {}) {
  if (Ls.size() < 2) throw invalid_state_error("entropy_vs_L: need at least 2 separations");
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    if (Ls[i] < 2) throw invalid_state_error("entropy_vs_L: L must be >= 2");
    if (i > 0 && Ls[i] <= Ls[i - 1])
      throw invalid_state_error("entropy_vs_L: separations must be ascending");
  }
  PlateScan out;
  out.L_ref = opt.ref_factor * Ls.back();
  PlateSystem ref = sys;
  ref.L = out.L_ref;
  auto pieces_ref = detail::entropy_pieces(correlator_parts(ref, 0.0, opt));
  for (int L : Ls) {
    sys.L = L;
    auto p = correlator_parts(sys, 0.0, opt);
    auto e = detail::entropy_pieces(p);
    PlateRecord r;
    r.L = L;
    r.k_perp_dim = 0;
    const double mu_iso = 2.0 * std::sqrt(p.g_single * p.h_single);
    r.S = entropy_h_from_delta(e.pair.mu_plus - 1.0) +
          entropy_h_from_delta(e.pair.mu_minus - 1.0);
    r.S_R = e.total - pieces_ref.total;
    r.lambda_plus = e.pair.lambda_plus;
    r.lambda_minus = e.pair.lambda_minus;
    r.s_r_split = e.split - pieces_ref.split;
    r.s_r_scatter = e.scatter - pieces_ref.scatter;
    // entropy error bound from correlator error via d h / d mu
    const double dmu = e.pair.mu_minus - 1.0;
    r.err_bound = p.err * (dmu > 0 ? std::log((2.0 + dmu) / dmu) : 1.0);
    (void)mu_iso;
    out.records.push_back(r);
  }
  std::vector<std::pair<double, double>> pts;
  bool fittable = out.records.size() >= 3;
  for (const auto& r : out.records) {
    if (r.S_R <= 0.0) out.s_r_positive = false;
    if (std::abs(r.S_R) == 0.0) fittable = false;
    pts.emplace_back((double)r.L, std::abs(r.S_R));
  }
  if (fittable) out.fit = fit_power_law(pts);
  return out;
}

struct TransverseOptions {
  PlateOptions plate;
  double kp_cut_over_L = 40.0;  // integrand support ends exponentially by ~40/L
  double kp_tol = 1e-5;         // relative tolerance of the k_perp integral
  int kp_panels = 80;
};

// S(L, kp) - S(L_ref, kp) at one transverse momentum, from stable pieces.
inline double entropy_difference_at_kp(const PlateSystem& sys, int L_ref, double kp,
                                       const PlateOptions& opt = {}) {
  PlateSystem ref = sys;
  ref.L = L_ref;
  auto el = detail::entropy_pieces(correlator_parts(sys, kp, opt));
  auto er = detail::entropy_pieces(correlator_parts(ref, kp, opt));
  return el.total - er.total;
}

// Entropy per unit transverse volume: int d^d kp/(2pi)^d [S(L,kp)-S(inf,kp)].
inline PlateScan entropy_vs_L_transverse(PlateSystem sys, const std::vector<int>& Ls, int d_perp,
                                         const TransverseOptions& topt = {}) {
  if (d_perp != 1 && d_perp != 2)
    throw invalid_state_error("entropy_vs_L_transverse: d_perp must be 1 or 2");
  PlateScan out;
  out.L_ref = topt.plate.ref_factor * Ls.back();
  for (int L : Ls) {
    sys.L = L;
    sys.d_perp = d_perp;
    const double top = topt.kp_cut_over_L / L;
    auto integrand = [&](double kp) {
      const double meas = d_perp == 1 ? 1.0 / std::numbers::pi
                                      : kp / (2.0 * std::numbers::pi);
      return meas * entropy_difference_at_kp(sys, out.L_ref, kp, topt.plate);
    };
    auto seeds = dyadic_seeds(top, 16);
    QuadratureResult coarse = integrate_adaptive(integrand, 0.0, top, 1e-2, 24, seeds);
    QuadratureResult fine = integrate_adaptive(
        integrand, 0.0, top, topt.kp_tol * (std::abs(coarse.value) + 1e-300), topt.kp_panels,
        seeds);
    auto p0 = correlator_parts(sys, 0.0, topt.plate);
    auto e0 = detail::entropy_pieces(p0);
    PlateRecord r;
    r.L = L;
    r.k_perp_dim = d_perp;
    r.S = entropy_h_from_delta(e0.pair.mu_plus - 1.0) +
          entropy_h_from_delta(e0.pair.mu_minus - 1.0);
    r.S_R = fine.value;
    r.lambda_plus = e0.pair.lambda_plus;
    r.lambda_minus = e0.pair.lambda_minus;
    r.err_bound = fine.error_estimate;
    out.records.push_back(r);
  }
  std::vector<std::pair<double, double>> pts;
  bool fittable = out.records.size() >= 3;
  for (const auto& r : out.records) {
    if (r.S_R <= 0.0) out.s_r_positive = false;
    if (std::abs(r.S_R) == 0.0) fittable = false;
    pts.emplace_back((double)r.L, std::abs(r.S_R));
  }
  if (fittable) out.fit = fit_power_law(pts);
  return out;
}

// k_perp at which the transverse integrand falls to `frac` of its kp -> 0
// value; the support shrinks like 1/L.
inline double transverse_support_width(const PlateSystem& sys, int L_ref, double frac = 1e-6,
                                       const PlateOptions& opt = {}) {
  const double base = std::abs(entropy_difference_at_kp(sys, L_ref, 1e-4 / sys.L, opt));
  double lo = 1e-4 / sys.L, hi = 80.0 / sys.L;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = std::abs(entropy_difference_at_kp(sys, L_ref, mid, opt));
    (v > frac * base ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fieldent
