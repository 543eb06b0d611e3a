#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <json.hpp>

#include "fieldent/errors.hpp"

// Susceptibility models evaluated on the imaginary frequency axis only
// (all correlators in this project are Euclidean). Convention:
// eps = 1 + 4*pi*chi with chi carrying omega_p^2, so the effective plasma
// mass appearing in the kernels is 4*pi*omega_p^2, not omega_p^2.
namespace fieldent {

inline constexpr double kFourPi = 4.0 * std::numbers::pi;

enum class ModelKind { Vacuum, PurePlasma, Lorentz, Drude, LorentzPlusDrude, SpatialDispersion };

struct SusceptibilityModel {
  ModelKind kind = ModelKind::Vacuum;
  double omega_p = 0.0;  // oscillator coupling (Lorentz / plasma)
  double omega_0 = 0.0;  // resonance frequency
  double gamma_p = 0.0;  // oscillator damping
  double omega_c = 0.0;  // Drude coupling
  double gamma_c = 0.0;  // Drude relaxation
  double A = 0.0;        // spatial-dispersion k^2 coefficient
  double f = 0.0;        // spatial-dispersion oscillator strength
  double eps0 = 1.0;     // spatial-dispersion overall scale

  void validate() const {
    auto nonneg = [](double v, const char* name) {
      if (!(v >= 0.0)) throw invalid_state_error(std::string("model: ") + name + " must be >= 0");
    };
    nonneg(omega_p, "omega_p");
    nonneg(omega_0, "omega_0");
    nonneg(gamma_p, "gamma_p");
    nonneg(omega_c, "omega_c");
    nonneg(gamma_c, "gamma_c");
    nonneg(A, "A");
    nonneg(f, "f");
    if (kind == ModelKind::SpatialDispersion && !(eps0 >= 1.0))
      throw invalid_state_error("model: eps0 must be >= 1");
  }

  static SusceptibilityModel vacuum() { return {}; }
  static SusceptibilityModel pure_plasma(double wp) {
    SusceptibilityModel m;
    m.kind = ModelKind::PurePlasma;
    m.omega_p = wp;
    return m;
  }
  static SusceptibilityModel lorentz(double wp, double w0, double gp) {
    SusceptibilityModel m;
    m.kind = ModelKind::Lorentz;
    m.omega_p = wp;
    m.omega_0 = w0;
    m.gamma_p = gp;
    return m;
  }
  static SusceptibilityModel drude(double wc, double gc) {
    SusceptibilityModel m;
    m.kind = ModelKind::Drude;
    m.omega_c = wc;
    m.gamma_c = gc;
    return m;
  }
  static SusceptibilityModel lorentz_plus_drude(double wp, double w0, double gp, double wc,
                                                double gc) {
    SusceptibilityModel m;
    m.kind = ModelKind::LorentzPlusDrude;
    m.omega_p = wp;
    m.omega_0 = w0;
    m.gamma_p = gp;
    m.omega_c = wc;
    m.gamma_c = gc;
    return m;
  }
  static SusceptibilityModel spatial_dispersion(double eps0_, double f_, double A_, double gamma_,
                                                double w0) {
    SusceptibilityModel m;
    m.kind = ModelKind::SpatialDispersion;
    m.eps0 = eps0_;
    m.f = f_;
    m.A = A_;
    m.gamma_p = gamma_;
    m.omega_0 = w0;
    return m;
  }
};

// chi(i*omega, k). Real and >= 0 for all supported variants.
inline double chi_imaginary(const SusceptibilityModel& m, double omega, double k = 0.0) {
  switch (m.kind) {
    case ModelKind::Vacuum:
      return 0.0;
    case ModelKind::PurePlasma:
      if (omega <= 0.0) throw std::domain_error("chi: pure plasma requires omega > 0");
      return m.omega_p * m.omega_p / (omega * omega);
    case ModelKind::Lorentz:
      return m.omega_p * m.omega_p /
             (m.omega_0 * m.omega_0 + omega * omega + m.gamma_p * omega);
    case ModelKind::Drude:
      if (omega <= 0.0) throw std::domain_error("chi: Drude requires omega > 0");
      return m.omega_c * m.omega_c / (omega * (m.gamma_c + omega));
    case ModelKind::LorentzPlusDrude: {
      if (omega <= 0.0) throw std::domain_error("chi: Drude requires omega > 0");
      const double lor = m.omega_p * m.omega_p /
                         (m.omega_0 * m.omega_0 + omega * omega + m.gamma_p * omega);
      return lor + m.omega_c * m.omega_c / (omega * (m.gamma_c + omega));
    }
    case ModelKind::SpatialDispersion: {
      const double e = m.A * k * k + m.gamma_p * omega + omega * omega + m.omega_0 * m.omega_0;
      return (m.eps0 - 1.0) / kFourPi + m.eps0 * m.f / (kFourPi * e);
    }
  }
  return 0.0;
}

inline double epsilon_imaginary(const SusceptibilityModel& m, double omega, double k = 0.0) {
  return 1.0 + kFourPi * chi_imaginary(m, omega, k);
}

// Mass kernel Delta(omega) = 4 pi omega^2 chi(i omega); the Euclidean mode
// kernel is D = omega^2 + k^2 + Delta.
inline double mass_kernel(const SusceptibilityModel& m, double omega, double k = 0.0) {
  switch (m.kind) {
    case ModelKind::Vacuum:
      return 0.0;
    case ModelKind::PurePlasma:
      return kFourPi * m.omega_p * m.omega_p;
    default:
      return kFourPi * omega * omega * chi_imaginary(m, omega, k);
  }
}

// True when Delta(omega) approaches a finite limit Delta_inf as omega -> inf,
// which is what makes the momentum correlator integral convergent.
inline bool has_finite_mass_gap(const SusceptibilityModel& m) {
  return m.kind != ModelKind::SpatialDispersion || m.eps0 == 1.0;
}

inline double mass_kernel_inf(const SusceptibilityModel& m, double k = 0.0) {
  (void)k;
  switch (m.kind) {
    case ModelKind::Vacuum:
      return 0.0;
    case ModelKind::PurePlasma:
      return kFourPi * m.omega_p * m.omega_p;
    case ModelKind::Lorentz:
      return kFourPi * m.omega_p * m.omega_p;
    case ModelKind::Drude:
      return kFourPi * m.omega_c * m.omega_c;
    case ModelKind::LorentzPlusDrude:
      return kFourPi * (m.omega_p * m.omega_p + m.omega_c * m.omega_c);
    case ModelKind::SpatialDispersion:
      if (m.eps0 != 1.0)
        throw std::domain_error("mass_kernel_inf: spatial dispersion with eps0 > 1 has no finite limit");
      return m.f;
  }
  return 0.0;
}

// Delta(omega) - Delta_inf, written per variant so no subtraction of nearly
// equal values ever happens. Exactly zero for vacuum and pure plasma; <= 0
// elsewhere.
inline double mass_kernel_deficit(const SusceptibilityModel& m, double omega, double k = 0.0) {
  switch (m.kind) {
    case ModelKind::Vacuum:
    case ModelKind::PurePlasma:
      return 0.0;
    case ModelKind::Lorentz: {
      const double e = m.omega_0 * m.omega_0 + omega * omega + m.gamma_p * omega;
      return -kFourPi * m.omega_p * m.omega_p * (m.omega_0 * m.omega_0 + m.gamma_p * omega) / e;
    }
    case ModelKind::Drude:
      return -kFourPi * m.omega_c * m.omega_c * m.gamma_c / (m.gamma_c + omega);
    case ModelKind::LorentzPlusDrude: {
      const double e = m.omega_0 * m.omega_0 + omega * omega + m.gamma_p * omega;
      return -kFourPi * m.omega_p * m.omega_p * (m.omega_0 * m.omega_0 + m.gamma_p * omega) / e -
             kFourPi * m.omega_c * m.omega_c * m.gamma_c / (m.gamma_c + omega);
    }
    case ModelKind::SpatialDispersion: {
      if (m.eps0 != 1.0)
        throw std::domain_error("mass_kernel_deficit: requires eps0 = 1");
      const double e = m.A * k * k + m.gamma_p * omega + omega * omega + m.omega_0 * m.omega_0;
      return -m.f * (m.A * k * k + m.gamma_p * omega + m.omega_0 * m.omega_0) / e;
    }
  }
  return 0.0;
}

inline std::string model_name(ModelKind k) {
  switch (k) {
    case ModelKind::Vacuum: return "vacuum";
    case ModelKind::PurePlasma: return "plasma";
    case ModelKind::Lorentz: return "lorentz";
    case ModelKind::Drude: return "drude";
    case ModelKind::LorentzPlusDrude: return "lorentz-drude";
    case ModelKind::SpatialDispersion: return "spatial-dispersion";
  }
  return "?";
}

inline nlohmann::json to_json(const SusceptibilityModel& m) {
  nlohmann::json j;
  j["model"] = model_name(m.kind);
  j["omega_p"] = m.omega_p;
  j["omega_0"] = m.omega_0;
  j["gamma_p"] = m.gamma_p;
  j["omega_c"] = m.omega_c;
  j["gamma_c"] = m.gamma_c;
  j["A"] = m.A;
  j["f"] = m.f;
  j["eps0"] = m.eps0;
  return j;
}

inline SusceptibilityModel model_from_json(const nlohmann::json& j) {
  SusceptibilityModel m;
  const std::string name = j.at("model").get<std::string>();
  if (name == "vacuum") m.kind = ModelKind::Vacuum;
  else if (name == "plasma" || name == "pure-plasma") m.kind = ModelKind::PurePlasma;
  else if (name == "lorentz") m.kind = ModelKind::Lorentz;
  else if (name == "drude") m.kind = ModelKind::Drude;
  else if (name == "lorentz-drude" || name == "lorentz+drude") m.kind = ModelKind::LorentzPlusDrude;
  else if (name == "spatial-dispersion") m.kind = ModelKind::SpatialDispersion;
  else throw invalid_state_error("model json: unknown model '" + name + "'");
  auto get = [&](const char* key, double dflt) {
    return j.contains(key) ? j.at(key).get<double>() : dflt;
  };
  m.omega_p = get("omega_p", 0.0);
  m.omega_0 = get("omega_0", 0.0);
  m.gamma_p = get("gamma_p", 0.0);
  m.omega_c = get("omega_c", 0.0);
  m.gamma_c = get("gamma_c", 0.0);
  m.A = get("A", 0.0);
  m.f = get("f", 0.0);
  m.eps0 = get("eps0", 1.0);
  m.validate();
  return m;
}

inline std::string model_id(const SusceptibilityModel& m) {
  nlohmann::json j = to_json(m);
  return j.dump();
}

}  // namespace fieldent
