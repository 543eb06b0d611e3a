#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "fieldent/gaussian.hpp"
#include "support/generators.hpp"

using namespace fieldent;

TEST_CASE("symplectic form basics", "[gaussian]") {
  auto s = SymplecticForm(3).matrix();
  CHECK((s + s.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s * s + Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectrum of simple states", "[gaussian]") {
  auto vac = symplectic_spectrum(CovarianceMatrix::identity(2));
  REQUIRE(vac.size() == 2);
  CHECK(vac[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(vac[1] == Catch::Approx(1.0).margin(1e-12));

  CovarianceMatrix thermal(Eigen::Matrix2d(Eigen::Vector2d(2.0, 2.0).asDiagonal()));
  auto mu = symplectic_spectrum(thermal);
  REQUIRE(mu.size() == 1);
  CHECK(mu[0] == Catch::Approx(2.0).margin(1e-12));

  // pure squeezed state diag(a, 1/a)
  CovarianceMatrix squeezed(Eigen::Matrix2d(Eigen::Vector2d(5.0, 0.2).asDiagonal()));
  auto mu2 = symplectic_spectrum(squeezed);
  CHECK(mu2[0] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("input validation", "[gaussian]") {
  Eigen::Matrix2d bad;
  bad << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(CovarianceMatrix(bad), invalid_state_error);

  CovarianceMatrix below(Eigen::Matrix2d(Eigen::Vector2d(0.5, 0.5).asDiagonal()));
  CHECK_THROWS_AS(symplectic_spectrum(below), unphysical_state_error);
}

TEST_CASE("williamson on simple states", "[gaussian]") {
  auto id = williamson_decompose(CovarianceMatrix::identity(2));
  CHECK((id.D - Eigen::VectorXd::Ones(4)).cwiseAbs().maxCoeff() < 1e-12);

  CovarianceMatrix thermal(Eigen::Matrix2d(Eigen::Vector2d(2.0, 2.0).asDiagonal()));
  auto dec = williamson_decompose(thermal);
  CHECK(dec.D(0) == Catch::Approx(2.0).margin(1e-12));
  auto sigma = SymplecticForm(1).matrix();
  CHECK((dec.W.transpose() * sigma * dec.W - sigma).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("williamson recovers a planted spectrum", "[gaussian]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + (int)(rng() % 6);
    Eigen::VectorXd d(2 * n);
    std::uniform_real_distribution<double> mu_dist(1.0, 4.0);
    std::vector<double> planted;
    for (int i = 0; i < n; ++i) {
      const double mu = mu_dist(rng);
      planted.push_back(mu);
      d(2 * i) = d(2 * i + 1) = mu;
    }
    std::sort(planted.begin(), planted.end(), std::greater<>());
    Eigen::MatrixXd s = testing::random_symplectic(n, rng);
    CovarianceMatrix gamma(Eigen::MatrixXd(s * d.asDiagonal() * s.transpose()));

    auto dec = williamson_decompose(gamma);
    const auto sigma = SymplecticForm(n).matrix();
    CHECK((dec.W.transpose() * sigma * dec.W - sigma).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::MatrixXd wd = dec.W * gamma.m * dec.W.transpose();
    Eigen::MatrixXd off = wd - Eigen::MatrixXd(wd.diagonal().asDiagonal());
    CHECK(off.cwiseAbs().maxCoeff() < 1e-10 * gamma.m.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i)
      CHECK(dec.D(2 * i) == Catch::Approx(planted[(std::size_t)i]).epsilon(1e-9));
  }
}

TEST_CASE("spectrum_from_gh conventions", "[gaussian]") {
  Eigen::MatrixXd g(1, 1), h(1, 1);
  const double pi = std::numbers::pi;
  g << pi / 2;
  h << pi / 2;
  auto mu = spectrum_from_gh(g, h, 2.0 / pi);
  CHECK(mu[0] == Catch::Approx(1.0).margin(1e-13));

  // lattice convention: decoupled product 1/4 -> mu = 1
  const double w0 = 3.0;
  g << 2.0 * pi * pi / w0;
  h << w0 / (8.0 * pi * pi);
  CHECK(spectrum_from_gh(g, h, 2.0)[0] == Catch::Approx(1.0).margin(1e-13));

  Eigen::MatrixXd g2 = Eigen::Vector2d(0.25, 2.25).asDiagonal();
  Eigen::MatrixXd h2 = Eigen::Matrix2d::Identity();
  auto mu2 = spectrum_from_gh(g2, h2, 2.0);
  CHECK(mu2[0] == Catch::Approx(3.0).margin(1e-12));
  CHECK(mu2[1] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("spectrum_from_gh matches assembled covariance", "[gaussian]") {
  // vanishing cross correlations: gamma = interleave(2G, 2H) has the lattice
  // convention spectrum 2 sqrt(eig(GH))
  Eigen::Matrix2d g, h;
  g << 3.2, -0.4, -0.4, 3.2;
  h << 0.09, 0.01, 0.01, 0.09;
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      gamma(2 * i, 2 * j) = 2.0 * g(i, j);
      gamma(2 * i + 1, 2 * j + 1) = 2.0 * h(i, j);
    }
  auto direct = symplectic_spectrum(CovarianceMatrix(gamma));
  auto from_gh = spectrum_from_gh(g, h, 2.0);
  REQUIRE(direct.size() == from_gh.size());
  for (std::size_t i = 0; i < direct.size(); ++i)
    CHECK(direct[i] == Catch::Approx(from_gh[i]).epsilon(1e-10));
}

TEST_CASE("entropy function", "[gaussian]") {
  CHECK(entropy_h(1.0) == 0.0);
  CHECK(entropy_of_spectrum({3.0}) == Catch::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(entropy_of_spectrum({2.0}) ==
        Catch::Approx(1.5 * std::log(1.5) - 0.5 * std::log(0.5)).epsilon(1e-12));
  CHECK(entropy_of_spectrum({2.0}) == Catch::Approx(0.954771).margin(1e-6));
  CHECK_THROWS_AS(entropy_h(0.9), unphysical_state_error);

  // monotone increasing, -> 0 at mu -> 1+
  double prev = 0.0;
  for (double mu : {1.0 + 1e-10, 1.0 + 1e-6, 1.01, 1.5, 2.0, 5.0}) {
    const double h = entropy_h(mu);
    CHECK(h >= prev);
    prev = h;
  }
  CHECK(entropy_h(1.0 + 1e-10) < 1e-8);
  CHECK(entropy_h_from_delta(0.0) == 0.0);
  CHECK(entropy_h_from_delta(1e-20) > 0.0);
}

TEST_CASE("mode exponents and occupations", "[gaussian]") {
  auto u = mode_exponents({3.0});
  CHECK(u[0] == Catch::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(occupations({3.0})[0] == Catch::Approx(1.0).epsilon(1e-12));

  CHECK(std::isinf(mode_exponents({1.0})[0]));
  CHECK(occupations({1.0})[0] == 0.0);

  // consistency n = 1/(e^u - 1) at mu = 1.5
  auto u15 = mode_exponents({1.5})[0];
  CHECK(u15 == Catch::Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(occupations({1.5})[0] == Catch::Approx(1.0 / (std::exp(u15) - 1.0)).epsilon(1e-12));
}

TEST_CASE("reduce", "[gaussian]") {
  auto id4 = CovarianceMatrix::identity(4);
  auto r = reduce(id4, {1, 3});
  CHECK(r.n == 2);
  CHECK((r.m - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  // two-mode squeezed state, r = 0.5
  const double c = std::cosh(1.0), s = std::sinh(1.0);
  Eigen::MatrixXd tms(4, 4);
  tms << c, 0, s, 0, 0, c, 0, -s, s, 0, c, 0, 0, -s, 0, c;
  CovarianceMatrix gamma(tms);
  auto full = symplectic_spectrum(gamma);
  CHECK(full[0] == Catch::Approx(1.0).margin(1e-10));
  CHECK(full[1] == Catch::Approx(1.0).margin(1e-10));
  auto red = reduce(gamma, {0});
  CHECK(red.m(0, 0) == Catch::Approx(c));
  CHECK(red.m(1, 1) == Catch::Approx(c));
  auto mu = symplectic_spectrum(red);
  CHECK(mu[0] == Catch::Approx(std::cosh(1.0)).epsilon(1e-12));
  CHECK(mu[0] == Catch::Approx(1.5431).margin(1e-4));

  CHECK_THROWS_AS(reduce(id4, {}), invalid_state_error);
  CHECK_THROWS_AS(reduce(id4, {4}), invalid_state_error);
}

TEST_CASE("reduction never dips below vacuum", "[gaussian]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + (int)(rng() % 4);
    auto gamma = testing::random_physical_covariance(n, rng);
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
      if (rng() % 2 == 0) keep.push_back(i);
    if (keep.empty()) keep.push_back(0);
    auto mu = symplectic_spectrum(reduce(gamma, keep));
    for (double v : mu) CHECK(v >= 1.0 - 1e-9);
  }
}

TEST_CASE("entropy invariant under symplectic conjugation", "[gaussian]") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + (int)(rng() % 5);
    auto gamma = testing::random_physical_covariance(n, rng);
    const double s0 = entropy_of_spectrum(symplectic_spectrum(gamma));
    Eigen::MatrixXd s = testing::random_symplectic(n, rng, 0.4);
    CovarianceMatrix conj(Eigen::MatrixXd(s * gamma.m * s.transpose()));
    const double s1 = entropy_of_spectrum(symplectic_spectrum(conj));
    CHECK(s1 == Catch::Approx(s0).margin(1e-9 * (1.0 + s0)));
  }
}

TEST_CASE("covariance json round trip", "[gaussian]") {
  std::mt19937_64 rng(3);
  auto gamma = testing::random_physical_covariance(3, rng);
  auto j = to_json(gamma);
  CHECK(j["n"] == 3);
  CHECK(j["ordering"] == "interleaved");
  auto back = covariance_from_json(j);
  CHECK((back.m - gamma.m).cwiseAbs().maxCoeff() == 0.0);

  auto badj = j;
  badj["data"] = std::vector<double>{1.0, 2.0};
  CHECK_THROWS_AS(covariance_from_json(badj), invalid_state_error);
}
