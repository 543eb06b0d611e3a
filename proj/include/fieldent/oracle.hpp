#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fieldent/constants.hpp"
#include "fieldent/errors.hpp"
#include "fieldent/gaussian.hpp"

// Exact brute-force oracle: canonical quantization of the coupled phi-psi
// harmonic lattice, ground-state covariance by Williamson diagonalization of
// the Hamiltonian matrix, subsystem entropies by partial trace.
//
// Time-domain Lagrangian (signs fixed by Hamiltonian positivity and by the
// induced response kernel, checked in verify_effective_response):
//   L = sum_x [ phi_dot^2/2 - (phi_{x+1}-phi_x)^2/2 - m_ir^2 phi_x^2/2 ]
//     + sum_B [ (psi_dot^2 - w0^2 psi^2)/(16 pi^2) + wp psi phi_dot ]
// giving pi_phi = phi_dot + wp psi on body sites, pi_psi = psi_dot/(8 pi^2).
namespace fieldent {

enum class Boundary { Periodic, Open };  // Open = pinned (Dirichlet) walls

struct CoupledLatticeModel {
  int N = 32;
  std::vector<int> body_sites;
  double omega_0 = 3.0;
  double omega_p = 0.1;
  Boundary boundary = Boundary::Periodic;
  // IR regulator mass for the chain. The periodic free chain has a uniform
  // zero mode; a small mass makes the ground state normalizable and perturbs
  // the matter-sector entropy negligibly (the coupling is ~ wp*omega).
  // Negative means automatic: 1e-4 for periodic, 0 for pinned walls.
  double ir_mass = -1.0;

  double effective_ir_mass() const {
    if (ir_mass >= 0.0) return ir_mass;
    return boundary == Boundary::Periodic ? 1e-4 : 0.0;
  }

  void validate() const {
    if (N < 2) throw invalid_state_error("oracle: N must be >= 2");
    if (body_sites.empty()) throw invalid_state_error("oracle: need at least one body site");
    if ((int)body_sites.size() * 2 > N)
      throw invalid_state_error("oracle: need N >= 2 |B|");
    for (int b : body_sites)
      if (b < 0 || b >= N) throw invalid_state_error("oracle: body site out of range");
    for (std::size_t i = 1; i < body_sites.size(); ++i)
      if (body_sites[i] <= body_sites[i - 1])
        throw invalid_state_error("oracle: body sites must be strictly ascending");
    if (!(omega_0 > 0.0)) throw invalid_state_error("oracle: omega_0 must be > 0");
    if (!(omega_p >= 0.0)) throw invalid_state_error("oracle: omega_p must be >= 0");
  }
};

// 2(N+|B|)-dimensional quadratic form over (positions..., momenta...),
// H = z^T m z / 2. Cross blocks couple pi_phi with psi on body sites.
struct QuadraticHamiltonian {
  int n_modes = 0;
  Eigen::MatrixXd m;  // block ordering
  double smallest_eigenvalue = 0.0;
};

inline QuadraticHamiltonian build_hamiltonian(const CoupledLatticeModel& model) {
  model.validate();
  const int N = model.N;
  const int nb = (int)model.body_sites.size();
  const int n = N + nb;
  const double mir2 = model.effective_ir_mass() * model.effective_ir_mass();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);

  // potential block: chain gradient term + IR mass + psi pinning
  for (int x = 0; x < N; ++x) {
    const bool last = (x + 1 == N);
    if (!last || model.boundary == Boundary::Periodic) {
      const int y = (x + 1) % N;
      m(x, x) += 1.0;
      m(y, y) += 1.0;
      m(x, y) -= 1.0;
      m(y, x) -= 1.0;
    }
    m(x, x) += mir2;
  }
  if (model.boundary == Boundary::Open) {
    // pinned walls: phi_{-1} = phi_N = 0
    m(0, 0) += 1.0;
    m(N - 1, N - 1) += 1.0;
  }
  for (int i = 0; i < nb; ++i) {
    const int qi = N + i;
    m(qi, qi) += model.omega_0 * model.omega_0 / kPiSq8;
    m(qi, qi) += model.omega_p * model.omega_p;  // from (pi_phi - wp psi)^2/2
  }
  // kinetic block
  for (int x = 0; x < N; ++x) m(n + x, n + x) = 1.0;
  for (int i = 0; i < nb; ++i) m(n + N + i, n + N + i) = kPiSq8;
  // cross: -wp pi_phi(b) psi_i
  for (int i = 0; i < nb; ++i) {
    const int b = model.body_sites[(std::size_t)i];
    m(N + i, n + b) = -model.omega_p;
    m(n + b, N + i) = -model.omega_p;
  }

  QuadraticHamiltonian h;
  h.n_modes = n;
  h.m = std::move(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.m, Eigen::EigenvaluesOnly);
  h.smallest_eigenvalue = es.eigenvalues().minCoeff();
  const double scale = std::max(1.0, h.m.cwiseAbs().maxCoeff());
  if (h.smallest_eigenvalue < -1e-11 * scale)
    throw std::domain_error("oracle: unstable Hamiltonian, smallest eigenvalue = " +
                            std::to_string(h.smallest_eigenvalue));
  return h;
}

// Normal-mode frequencies = Williamson values of the Hamiltonian matrix.
inline std::vector<double> normal_mode_frequencies(const QuadraticHamiltonian& h) {
  return symplectic_values(interleaved_from_block(h.m));
}

// gamma = W^T W for the symplectic W with W H W^T = diag of frequencies;
// vacuum of each normal mode then has unit covariance. Interleaved ordering,
// modes 0..N-1 are the chain sites, then the matter oscillators.
inline CovarianceMatrix ground_state_covariance(const QuadraticHamiltonian& h) {
  const double scale = std::max(1.0, h.m.cwiseAbs().maxCoeff());
  if (h.smallest_eigenvalue <= 1e-12 * scale)
    throw std::domain_error(
        "oracle: Hamiltonian has a (near-)zero mode; use pinned walls or an IR mass");
  auto dec = williamson_decompose(interleaved_from_block(h.m));
  CovarianceMatrix g;
  g.n = h.n_modes;
  g.m = dec.W.transpose() * dec.W;
  g.m = 0.5 * (g.m + g.m.transpose().eval());
  return g;
}

struct SubsystemEntropies {
  double S_phi = 0.0;
  double S_psi = 0.0;
  CovarianceMatrix gamma_phi;
  CovarianceMatrix gamma_psi;
};

inline SubsystemEntropies subsystem_entropies(const CoupledLatticeModel& model) {
  auto h = build_hamiltonian(model);
  auto gamma = ground_state_covariance(h);
  std::vector<int> phi_modes(model.N), psi_modes(model.body_sites.size());
  for (int i = 0; i < model.N; ++i) phi_modes[(std::size_t)i] = i;
  for (std::size_t i = 0; i < model.body_sites.size(); ++i)
    psi_modes[i] = model.N + (int)i;
  SubsystemEntropies out;
  out.gamma_phi = reduce(gamma, phi_modes);
  out.gamma_psi = reduce(gamma, psi_modes);
  out.S_phi = entropy_of_spectrum(symplectic_spectrum(out.gamma_phi));
  out.S_psi = entropy_of_spectrum(symplectic_spectrum(out.gamma_psi));
  return out;
}

struct ResponseReport {
  double max_residual = 0.0;
  bool pass = false;
  double extracted_omega_p = 0.0;
  double extracted_omega_0 = 0.0;
};

// Integrates the matter oscillator out of the built Hamiltonian at quadratic
// order (Schur complement of the psi sector) and checks that the induced
// field self-energy on the imaginary axis is 8 pi^2 wp^2 w^2/(w^2+w0^2).
inline ResponseReport verify_effective_response(const CoupledLatticeModel& model) {
  auto h = build_hamiltonian(model);
  const int N = model.N, n = h.n_modes;
  ResponseReport rep;
  if (model.body_sites.empty()) return rep;
  const int qi = N;  // first matter oscillator
  const int b = model.body_sites[0];
  const double coupling = -h.m(qi, n + b);               // wp
  const double kinetic = h.m(n + qi, n + qi);            // 8 pi^2 = 1/mass
  const double pot = h.m(qi, qi) - coupling * coupling;  // w0^2/(8 pi^2)
  rep.extracted_omega_p = coupling;
  rep.extracted_omega_0 = std::sqrt(pot * kinetic);
  double worst = 0.0;
  for (double w : {0.1, 1.0, 10.0}) {
    // psi frequency kernel a(w) = (w^2 + w0^2)/(8 pi^2); coupling b(w) = i wp w
    const double a = w * w / kinetic + pot;
    const double sigma_extracted = coupling * coupling * w * w / a;
    const double sigma_model = kPiSq8 * model.omega_p * model.omega_p * w * w /
                               (w * w + model.omega_0 * model.omega_0);
    const double denom = std::max(std::abs(sigma_model), 1e-300);
    worst = std::max(worst, std::abs(sigma_extracted - sigma_model) /
                                (model.omega_p > 0 ? denom : 1.0));
  }
  rep.max_residual = worst;
  rep.pass = worst < 1e-10;
  return rep;
}

struct OracleComparison {
  double S_phi = 0.0;
  double S_psi = 0.0;
  double S_plate_module = 0.0;
  double rel_diff = 0.0;
  int N = 0;
  int L = 0;
  double omega_0 = 0.0;
  double omega_p = 0.0;
};

// Chain separation between the two body sites (shortest path for periodic).
inline int body_separation(const CoupledLatticeModel& model) {
  if (model.body_sites.size() != 2)
    throw invalid_state_error("oracle comparison: needs exactly two body sites");
  int d = model.body_sites[1] - model.body_sites[0];
  if (model.boundary == Boundary::Periodic) d = std::min(d, model.N - d);
  return d;
}

}  // namespace fieldent
