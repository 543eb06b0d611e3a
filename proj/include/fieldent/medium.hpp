#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fieldent/dielectric.hpp"
#include "fieldent/errors.hpp"
#include "fieldent/fitting.hpp"
#include "fieldent/gaussian.hpp"
#include "fieldent/quadrature.hpp"

// Translationally invariant medium: per-mode correlators, symplectic
// eigenvalue, entropy density vs UV cutoff, occupation statistics.
//
// mu_k is NOT formed as (2/pi)*sqrt(g_k h_k) of two finished quadratures:
// at large k that product cancels to ~1e-19 and drowns in roundoff. Instead,
// with m^2 = k^2 + Delta_inf, n(w) = Delta(w) - Delta_inf (exact per-model
// form, <= 0), D = w^2 + k^2 + Delta and D0 = w^2 + m^2, one has exactly
//   g = pi/(2m) - Q,   g h - pi^2/4 = P g - m^2 Q^2,
//   Q = int n/(D D0),  P = int n (w^2 - m^2)/(D D0),
// so mu_k^2 - 1 = (4/pi^2)(P g - m^2 Q^2) is built only from terms that are
// small when the state is nearly pure. Pure models have n == 0 and come out
// mu == 1 exactly.
namespace fieldent {

struct ModeDiagnostics {
  double k = 0.0;
  double g_k = 0.0;
  double h_k = 0.0;
  double mu_k = 1.0;
  double delta = 0.0;  // mu_k - 1 at full precision (mu_k rounds to 1 below 1e-16)
  double u_k = std::numeric_limits<double>::infinity();
  double n_k = 0.0;
  double t_k = 0.0;
  double err_bound = 0.0;
  std::int64_t evaluations = 0;
};

struct MediumOptions {
  double mode_tol = 1e-10;    // semi-infinite quadrature tolerance per correlator
  double radial_tol = 1e-8;   // relative tolerance of radial k-integrals
  int radial_panels = 600;
  bool with_h = true;         // momentum correlator is optional for entropy scans
};

namespace detail {

inline double angular_measure(int d) {
  // surface of the unit sphere over (2 pi)^d
  switch (d) {
    case 1: return 2.0 / (2.0 * std::numbers::pi);
    case 2: return 2.0 * std::numbers::pi / std::pow(2.0 * std::numbers::pi, 2);
    case 3: return 4.0 * std::numbers::pi / std::pow(2.0 * std::numbers::pi, 3);
    default: throw invalid_state_error("dimension must be 1, 2 or 3");
  }
}

}  // namespace detail

inline ModeDiagnostics mode_diagnostics(const SusceptibilityModel& model, double k,
                                        const MediumOptions& opt = {}) {
  model.validate();
  if (!has_finite_mass_gap(model))
    throw std::domain_error("mode_diagnostics: model has no finite high-frequency mass limit");
  const double m2 = k * k + mass_kernel_inf(model, k);
  if (!(m2 > 0.0))
    throw std::domain_error("mode_diagnostics: massless model requires k > 0");
  const double m = std::sqrt(m2);
  const double four_over_pi2 = 4.0 / (std::numbers::pi * std::numbers::pi);

  // D and the deficit numerator are each evaluated in their direct forms;
  // assembling D as D0 + n would cancel when k^2 << Delta_inf.
  auto deficit = [&](double w) { return mass_kernel_deficit(model, w, k); };
  auto dd0 = [&](double w) {
    return (w * w + m2) * (w * w + k * k + mass_kernel(model, w, k));
  };

  SemiInfiniteOptions so;
  so.tol = opt.mode_tol;
  so.abs_floor = 0.0;  // the deficit integrals need relative accuracy
  ModeDiagnostics out;
  out.k = k;

  const bool pure = model.kind == ModelKind::Vacuum || model.kind == ModelKind::PurePlasma;
  double qv = 0.0, pv = 0.0, qerr = 0.0, perr = 0.0;
  if (!pure) {
    auto q = integrate_semi_infinite([&](double w) { return deficit(w) / dd0(w); }, so);
    auto p = integrate_semi_infinite(
        [&](double w) { return deficit(w) * (w * w - m2) / dd0(w); }, so);
    qv = q.value;
    pv = p.value;
    qerr = q.error_estimate;
    perr = p.error_estimate;
    out.evaluations += q.evaluations + p.evaluations;
  }
  out.g_k = std::numbers::pi / (2.0 * m) - qv;

  // near-pure route: gh - pi^2/4 = P g - m^2 Q^2, no large cancellations as
  // long as the state is close to pure
  double mu2m1 = four_over_pi2 * (pv * out.g_k - m2 * qv * qv);
  double noise = four_over_pi2 * (perr * std::abs(out.g_k) + std::abs(pv) * qerr +
                                  2.0 * m2 * std::abs(qv) * qerr);
  const bool decomposition_ok =
      pure || (mu2m1 >= 0.0 && noise <= 1e-3 * mu2m1) ||
      (std::abs(mu2m1) <= std::max(1e-12, 4.0 * noise) && noise < 1e-9);

  bool have_h = false;
  if (!decomposition_ok || opt.with_h) {
    SemiInfiniteOptions ho = so;
    ho.abs_floor = 1e-8;  // h itself is an O(1)-scale correlator
    auto h = integrate_semi_infinite(
        [&](double w) {
          const double nn = k * k + mass_kernel(model, w, k);
          return nn / (w * w + nn);
        },
        ho);
    out.h_k = h.value;
    out.evaluations += h.evaluations;
    have_h = true;
    if (!decomposition_ok) {
      // strongly mixed regime: the direct product is well-conditioned here
      mu2m1 = four_over_pi2 * out.g_k * out.h_k - 1.0;
      noise = four_over_pi2 * (out.g_k * h.error_estimate +
                               std::abs(out.h_k) * (qerr + 1e-16 * std::abs(out.g_k)));
      if (!(mu2m1 > 1e-6))
        throw numerical_error(
            "mode_diagnostics: neither evaluation route is reliable at k = " +
                std::to_string(k),
            mu2m1);
    }
  }

  if (mu2m1 < 0.0) {
    if (-mu2m1 > std::max(1e-9, 8.0 * noise))
      throw unphysical_state_error("mode_diagnostics: mu below 1 beyond noise",
                                   std::sqrt(std::max(0.0, 1.0 + mu2m1)));
    mu2m1 = 0.0;
  }
  const double mu = std::sqrt(1.0 + mu2m1);
  out.delta = mu2m1 / (1.0 + mu);
  out.mu_k = 1.0 + out.delta;
  out.n_k = 0.5 * out.delta;
  out.u_k = out.delta > 0.0 ? std::log((2.0 + out.delta) / out.delta)
                            : std::numeric_limits<double>::infinity();
  out.t_k = out.delta > 0.0 ? k * k / out.u_k : 0.0;
  out.err_bound = noise;

  if (!have_h) {
    // consistent with the accepted product when not measured directly
    out.h_k = (std::numbers::pi * std::numbers::pi / 4.0) * (1.0 + mu2m1) / out.g_k;
  }
  return out;
}

// Eq.-(7)-style field correlator: int_0^inf dw / (w^2 eps(k,iw) + k^2).
inline double g_of_k(const SusceptibilityModel& model, double k, double tol = 1e-9) {
  model.validate();
  SemiInfiniteOptions so;
  so.tol = tol;
  auto r = integrate_semi_infinite(
      [&](double w) { return 1.0 / (w * w + k * k + mass_kernel(model, w, k)); }, so);
  return r.value;
}

// Momentum correlator with the point-splitting numerator k^2 + 4 pi w^2 chi.
inline double h_of_k(const SusceptibilityModel& model, double k, double tol = 1e-9) {
  model.validate();
  SemiInfiniteOptions so;
  so.tol = tol;
  auto r = integrate_semi_infinite(
      [&](double w) {
        const double nn = k * k + mass_kernel(model, w, k);
        return nn / (w * w + nn);
      },
      so);
  return r.value;
}

// delta(k) = mu_k - 1 with quadrature error bound; the entropy integrand
// building block.
inline std::pair<double, double> mode_delta(const SusceptibilityModel& model, double k,
                                            const MediumOptions& opt = {}) {
  MediumOptions o = opt;
  o.with_h = false;
  auto d = mode_diagnostics(model, k, o);
  return {d.delta, d.err_bound};
}

struct ScanRecord {
  double abscissa = 0.0;
  double value = 0.0;
  double err_bound = 0.0;
};

// Entropy per unit volume below cutoff: int_{|k|<=Lambda} d^dk/(2pi)^d h(mu_k),
// as a radial quadrature. Pure models give exactly zero.
inline double entropy_density(const SusceptibilityModel& model, double cutoff, int d,
                              const MediumOptions& opt = {}, double* err_out = nullptr) {
  if (!(cutoff > 0.0)) throw invalid_state_error("entropy_density: cutoff must be > 0");
  const double meas = detail::angular_measure(d);
  auto integrand = [&](double k) {
    try {
      return meas * std::pow(k, d - 1) * entropy_h_from_delta(mode_delta(model, k, opt).first);
    } catch (const numerical_error& e) {
      throw numerical_error("entropy_density: quadrature failure at k = " + std::to_string(k) +
                                ": " + e.what(),
                            e.partial_value, e.residual_norm);
    }
  };
  auto seeds = dyadic_seeds(cutoff, 44);
  QuadratureResult coarse = integrate_adaptive(integrand, 0.0, cutoff, 1e-3, 80, seeds);
  const double tol_abs = opt.radial_tol * (1.0 + std::abs(coarse.value));
  QuadratureResult fine =
      integrate_adaptive(integrand, 0.0, cutoff, tol_abs, opt.radial_panels, seeds);
  if (err_out) *err_out = fine.error_estimate;
  return fine.value;
}

struct CutoffScan {
  std::vector<ScanRecord> records;
  FitResult fit;
};

// Entropy density versus UV cutoff; segments are accumulated incrementally so
// the scan is monotone by construction, then fitted with S = a + b (log L)^p.
inline CutoffScan cutoff_scan(const SusceptibilityModel& model, const std::vector<double>& cutoffs,
                              int d, const MediumOptions& opt = {}) {
  if (cutoffs.size() < 4) throw invalid_state_error("cutoff_scan: need at least 4 cutoffs");
  for (std::size_t i = 1; i < cutoffs.size(); ++i)
    if (!(cutoffs[i] > cutoffs[i - 1]))
      throw invalid_state_error("cutoff_scan: cutoffs must be ascending");
  if (std::log10(cutoffs.back() / cutoffs.front()) < 2.9995)
    throw invalid_state_error("cutoff_scan: cutoffs must span at least 3 decades");
  const double meas = detail::angular_measure(d);
  auto integrand = [&](double k) {
    return meas * std::pow(k, d - 1) * entropy_h_from_delta(mode_delta(model, k, opt).first);
  };
  CutoffScan out;
  long double acc = 0.0L, err = 0.0L;
  double lo = 0.0;
  for (double cutoff : cutoffs) {
    auto seeds = dyadic_seeds(cutoff, lo == 0.0 ? 44 : 4);
    QuadratureResult seg = integrate_adaptive(
        integrand, lo, cutoff, opt.radial_tol * (1.0 + std::abs((double)acc)), opt.radial_panels,
        seeds);
    acc += seg.value;
    err += seg.error_estimate;
    out.records.push_back({cutoff, (double)acc, (double)err});
    lo = cutoff;
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : out.records) pts.emplace_back(r.abscissa, r.value);
  out.fit = fit_log_power(pts);
  return out;
}

// Number variance of modes with eps_I <= |k| <= k_m per unit volume.
inline double number_variance(const SusceptibilityModel& model, double k_m, int d, double eps_ir,
                              const MediumOptions& opt = {}) {
  if (!(eps_ir > 0.0 && eps_ir < k_m))
    throw invalid_state_error("number_variance: need 0 < eps_I < k_m");
  const double meas = detail::angular_measure(d);
  auto integrand = [&](double k) {
    const double n = 0.5 * mode_delta(model, k, opt).first;
    return meas * std::pow(k, d - 1) * n * (1.0 + n);
  };
  auto seeds = dyadic_seeds(k_m, 40);
  QuadratureResult coarse = integrate_adaptive(integrand, eps_ir, k_m, 1e-3, 80, seeds);
  return integrate_adaptive(integrand, eps_ir, k_m,
                            opt.radial_tol * (1.0 + std::abs(coarse.value)), opt.radial_panels,
                            seeds)
      .value;
}

struct HeffOptions {
  double k_max = 60.0;
  int k_points = 4001;     // uniform grid; must be odd (composite Simpson)
  double taper_frac = 0.25;  // cosine taper window on the top of the k-grid
};

// Radial Fourier transform of u_k at separations r:
//   u_hat(r) = beta^-1 int d^dk/(2pi)^d u_k e^{ik.r}
// on a fixed quadrature grid. u_k grows logarithmically, so the grid top is
// apodized with a cosine window; the kernel is a short-distance diagnostic,
// not a spectral-accuracy object.
inline std::vector<ScanRecord> heff_kernel(const SusceptibilityModel& model, double beta,
                                           const std::vector<double>& rs, int d,
                                           const MediumOptions& opt = {},
                                           const HeffOptions& ho = {}) {
  if (!(beta > 0.0)) throw invalid_state_error("heff_kernel: beta must be > 0");
  if (model.kind == ModelKind::Vacuum || model.kind == ModelKind::PurePlasma)
    throw std::domain_error("heff_kernel: u_k is infinite for a pure-state model");
  const int n = ho.k_points | 1;
  const double dk = ho.k_max / (n - 1);
  std::vector<double> uk((std::size_t)n, 0.0);
  for (int i = 1; i < n; ++i) {
    const double k = i * dk;
    const double delta = mode_delta(model, k, opt).first;
    if (!(delta > 0.0))
      throw std::domain_error("heff_kernel: u_k infinite at k = " + std::to_string(k));
    double u = std::log((2.0 + delta) / delta);
    const double t0 = (1.0 - ho.taper_frac) * ho.k_max;
    if (k > t0) u *= 0.5 * (1.0 + std::cos(std::numbers::pi * (k - t0) / (ho.k_max - t0)));
    uk[(std::size_t)i] = u;
  }
  const double meas = detail::angular_measure(d);
  std::vector<ScanRecord> out;
  for (double r : rs) {
    long double s = 0.0L;
    for (int i = 0; i < n; ++i) {
      const double k = i * dk;
      double kern;
      switch (d) {
        case 1: kern = std::cos(k * r); break;
        case 2: kern = k * std::cyl_bessel_j(0.0, k * r); break;
        default: kern = r > 0.0 ? k * std::sin(k * r) / r : k * k;
      }
      const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      s += (long double)(w * uk[(std::size_t)i] * kern);
    }
    const double measd = d == 1 ? meas : (d == 2 ? 1.0 / (2.0 * std::numbers::pi)
                                                 : 1.0 / (2.0 * std::numbers::pi * std::numbers::pi));
    out.push_back({r, (double)s * (dk / 3.0) * measd / beta, 0.0});
  }
  return out;
}

}  // namespace fieldent
