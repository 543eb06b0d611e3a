#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldent/errors.hpp"

// Gaussian-state machinery over canonical pairs in interleaved ordering
// (phi_1, pi_1, ..., phi_n, pi_n). Covariances are vacuum-normalized:
// gamma = 2 Re <(O-<O>)(O-<O>)^T>, so the vacuum is the identity.
namespace fieldent {

inline constexpr double kSymmetryTol = 1e-9;     // relative
inline constexpr double kPhysicalTol = 1e-9;     // mu >= 1 - tol
inline constexpr double kPureBranchTol = 1e-12;  // |mu-1| below this is pure

// Block-diagonal symplectic form, 2x2 blocks [[0,1],[-1,0]].
struct SymplecticForm {
  int n;
  explicit SymplecticForm(int modes) : n(modes) {}
  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
      s(2 * i, 2 * i + 1) = 1.0;
      s(2 * i + 1, 2 * i) = -1.0;
    }
    return s;
  }
};

struct CovarianceMatrix {
  int n = 0;
  Eigen::MatrixXd m;

  CovarianceMatrix() = default;
  explicit CovarianceMatrix(Eigen::MatrixXd mat) : m(std::move(mat)) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0)
      throw invalid_state_error("covariance: matrix must be 2n x 2n");
    n = (int)m.rows() / 2;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
      throw invalid_state_error("covariance: matrix not symmetric within tolerance");
    m = 0.5 * (m + m.transpose().eval());
  }

  static CovarianceMatrix identity(int modes) {
    CovarianceMatrix g;
    g.n = modes;
    g.m = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
    return g;
  }
};

// Converters between interleaved (q1,p1,q2,p2,...) and block (q...,p...) order.
inline Eigen::MatrixXd interleaved_from_block(const Eigen::MatrixXd& mb) {
  const int n = (int)mb.rows() / 2;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    p(2 * i, i) = 1.0;
    p(2 * i + 1, n + i) = 1.0;
  }
  return p * mb * p.transpose();
}

inline Eigen::MatrixXd block_from_interleaved(const Eigen::MatrixXd& mi) {
  const int n = (int)mi.rows() / 2;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    p(i, 2 * i) = 1.0;
    p(n + i, 2 * i + 1) = 1.0;
  }
  return p * mi * p.transpose();
}

using SymplecticSpectrum = std::vector<double>;

// Moduli of the eigenvalues of i*sigma*M, one per mode pair, descending.
// No physicality check: works for any symmetric positive matrix (covariances,
// Hamiltonian matrices, ...).
inline SymplecticSpectrum symplectic_values(const Eigen::MatrixXd& m) {
  const int n = (int)m.rows() / 2;
  Eigen::MatrixXd sm = SymplecticForm(n).matrix() * m;
  Eigen::EigenSolver<Eigen::MatrixXd> es(sm, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw numerical_error("symplectic_values: eigensolver failed");
  std::vector<double> a(2 * (std::size_t)n);
  for (int i = 0; i < 2 * n; ++i) a[(std::size_t)i] = std::abs(es.eigenvalues()[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  SymplecticSpectrum mu((std::size_t)n);
  for (int i = 0; i < n; ++i) mu[(std::size_t)i] = 0.5 * (a[2 * (std::size_t)i] + a[2 * (std::size_t)i + 1]);
  return mu;
}

inline SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& g) {
  auto mu = symplectic_values(g.m);
  for (double v : mu)
    if (v < 1.0 - kPhysicalTol)
      throw unphysical_state_error("symplectic_spectrum: eigenvalue below 1", v);
  return mu;
}

struct WilliamsonDecomposition {
  Eigen::MatrixXd W;  // symplectic, W gamma W^T = D
  Eigen::VectorXd D;  // paired diagonal (mu_1, mu_1, mu_2, mu_2, ...), descending
};

// Williamson normal form of a symmetric positive-definite matrix.
// Construction: r = V^{-1/2} sigma V^{-1/2} is antisymmetric; its real Schur
// form is block-diagonal with blocks [[0,1/mu],[-1/mu,0]] and orthogonal Q.
// W = D^{1/2} Q^T V^{-1/2} is then symplectic with W V W^T = D.
inline WilliamsonDecomposition williamson_decompose(const Eigen::MatrixXd& v) {
  const int n2 = (int)v.rows();
  const int n = n2 / 2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (v + v.transpose()));
  if (es.info() != Eigen::Success)
    throw numerical_error("williamson: eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw invalid_state_error("williamson: matrix not positive-definite");
  Eigen::MatrixXd vm12 = es.operatorInverseSqrt();
  Eigen::MatrixXd r = vm12 * SymplecticForm(n).matrix() * vm12;
  r = 0.5 * (r - r.transpose().eval());
  Eigen::RealSchur<Eigen::MatrixXd> schur(r);
  if (schur.info() != Eigen::Success)
    throw numerical_error("williamson: Schur iteration failed");
  Eigen::MatrixXd t = schur.matrixT();
  Eigen::MatrixXd q = schur.matrixU();
  // orient blocks so the upper-right entry is positive, then sort by mu desc
  std::vector<std::pair<double, int>> mus((std::size_t)n);
  for (int j = 0; j < n; ++j) {
    double b = t(2 * j, 2 * j + 1);
    if (b < 0) {
      q.col(2 * j).swap(q.col(2 * j + 1));
      b = -b;
    }
    if (!(b > 0))
      throw numerical_error("williamson: vanishing symplectic value", 0.0, b);
    mus[(std::size_t)j] = {1.0 / b, j};
  }
  std::sort(mus.begin(), mus.end(), [](auto& x, auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  Eigen::MatrixXd qs(n2, n2);
  Eigen::VectorXd d(n2);
  for (int j = 0; j < n; ++j) {
    const auto& [mu, src] = mus[(std::size_t)j];
    qs.col(2 * j) = q.col(2 * src);
    qs.col(2 * j + 1) = q.col(2 * src + 1);
    d(2 * j) = d(2 * j + 1) = mu;
  }
  WilliamsonDecomposition out;
  out.W = d.cwiseSqrt().asDiagonal() * qs.transpose() * vm12;
  out.D = d;
  return out;
}

inline WilliamsonDecomposition williamson_decompose(const CovarianceMatrix& g) {
  auto dec = williamson_decompose(g.m);
  const Eigen::MatrixXd sigma = SymplecticForm(g.n).matrix();
  const double rs = (dec.W.transpose() * sigma * dec.W - sigma).cwiseAbs().maxCoeff();
  Eigen::MatrixXd wd = dec.W * g.m * dec.W.transpose();
  const double rd = (wd - Eigen::MatrixXd(wd.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, g.m.cwiseAbs().maxCoeff());
  if (rs > 1e-10 || rd > 1e-10 * scale)
    throw numerical_error("williamson: residual tolerance exceeded", 0.0,
                          std::max(rs, rd / scale));
  for (int i = 0; i < g.n; ++i)
    if (dec.D(2 * i) < 1.0 - kPhysicalTol)
      throw unphysical_state_error("williamson: eigenvalue below 1", dec.D(2 * i));
  return dec;
}

// mu_i = scale * sqrt(eig_i(G H)) for symmetric positive-definite G, H with
// vanishing phi-pi cross correlations. Two conventions are used in this
// project: scale = 2/pi for the continuum correlators and scale = 2 for the
// lattice correlators (decoupled product 1/4).
inline SymplecticSpectrum spectrum_from_gh(const Eigen::MatrixXd& g,
                                           const Eigen::MatrixXd& h, double scale) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(0.5 * (g + g.transpose()));
  if (eg.info() != Eigen::Success || eg.eigenvalues().minCoeff() <= 0.0)
    throw numerical_error("spectrum_from_gh: G not positive-definite");
  Eigen::MatrixXd gh = eg.operatorSqrt() * 0.5 * (h + h.transpose()) * eg.operatorSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gh + gh.transpose()));
  if (es.info() != Eigen::Success)
    throw numerical_error("spectrum_from_gh: eigensolver failed");
  SymplecticSpectrum mu;
  for (int i = (int)es.eigenvalues().size() - 1; i >= 0; --i) {
    const double e = es.eigenvalues()(i);
    if (e <= 0.0) throw numerical_error("spectrum_from_gh: non-positive eigenvalue of GH", 0.0, e);
    mu.push_back(scale * std::sqrt(e));
  }
  return mu;
}

// Per-mode entropy h(mu); h(1) = 0 exactly (|mu-1| < 1e-12 branches to 0).
inline double entropy_h(double mu) {
  if (mu < 1.0 - kPhysicalTol)
    throw unphysical_state_error("entropy_h: mu below 1", mu);
  const double d = mu - 1.0;
  if (d < kPureBranchTol) return 0.0;  // pure within resolution (covers mu < 1 + tol)
  return (1.0 + 0.5 * d) * std::log1p(0.5 * d) - (0.5 * d) * std::log(0.5 * d);
}

// Same function parameterized by delta = mu - 1 >= 0; keeps precision for
// delta far below 1e-12 (radial entropy integrands need this).
inline double entropy_h_from_delta(double delta) {
  if (delta <= 0.0) return 0.0;
  return (1.0 + 0.5 * delta) * std::log1p(0.5 * delta) - (0.5 * delta) * std::log(0.5 * delta);
}

inline double entropy_of_spectrum(const SymplecticSpectrum& mu) {
  long double s = 0.0L;
  for (double v : mu) s += entropy_h(v);
  return (double)s;
}

// u_i = log((mu_i+1)/(mu_i-1)); mu = 1 maps to +infinity.
inline std::vector<double> mode_exponents(const SymplecticSpectrum& mu) {
  std::vector<double> u;
  u.reserve(mu.size());
  for (double v : mu) {
    if (v < 1.0 - kPhysicalTol)
      throw unphysical_state_error("mode_exponents: mu below 1", v);
    const double d = v - 1.0;
    u.push_back(d < kPureBranchTol ? std::numeric_limits<double>::infinity()
                                   : std::log((v + 1.0) / d));
  }
  return u;
}

inline std::vector<double> occupations(const SymplecticSpectrum& mu) {
  std::vector<double> n;
  n.reserve(mu.size());
  for (double v : mu) {
    if (v < 1.0 - kPhysicalTol)
      throw unphysical_state_error("occupations: mu below 1", v);
    n.push_back(std::max(0.0, 0.5 * (v - 1.0)));
  }
  return n;
}

// Principal submatrix on the selected mode pairs.
inline CovarianceMatrix reduce(const CovarianceMatrix& g, const std::vector<int>& modes) {
  if (modes.empty()) throw invalid_state_error("reduce: empty mode selection");
  for (int m : modes)
    if (m < 0 || m >= g.n) throw invalid_state_error("reduce: mode index out of range");
  const int k = (int)modes.size();
  Eigen::MatrixXd r(2 * k, 2 * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      r(2 * i, 2 * j) = g.m(2 * modes[(std::size_t)i], 2 * modes[(std::size_t)j]);
      r(2 * i, 2 * j + 1) = g.m(2 * modes[(std::size_t)i], 2 * modes[(std::size_t)j] + 1);
      r(2 * i + 1, 2 * j) = g.m(2 * modes[(std::size_t)i] + 1, 2 * modes[(std::size_t)j]);
      r(2 * i + 1, 2 * j + 1) = g.m(2 * modes[(std::size_t)i] + 1, 2 * modes[(std::size_t)j] + 1);
    }
  CovarianceMatrix out;
  out.n = k;
  out.m = std::move(r);
  return out;
}

inline nlohmann::json to_json(const CovarianceMatrix& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["ordering"] = "interleaved";
  std::vector<double> data;
  data.reserve((std::size_t)(4 * g.n * g.n));
  for (int r = 0; r < 2 * g.n; ++r)
    for (int c = 0; c < 2 * g.n; ++c) data.push_back(g.m(r, c));
  j["data"] = data;
  return j;
}

inline CovarianceMatrix covariance_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  if (j.at("ordering").get<std::string>() != "interleaved")
    throw invalid_state_error("covariance json: ordering must be 'interleaved'");
  const auto data = j.at("data").get<std::vector<double>>();
  if ((int)data.size() != 4 * n * n)
    throw invalid_state_error("covariance json: data length must be 4n^2");
  Eigen::MatrixXd m(2 * n, 2 * n);
  for (int r = 0; r < 2 * n; ++r)
    for (int c = 0; c < 2 * n; ++c) m(r, c) = data[(std::size_t)(r * 2 * n + c)];
  return CovarianceMatrix(std::move(m));
}

}  // namespace fieldent
