#include <cmath>

#include "doctest.h"

#include "cfmimo/estimation.hpp"
#include "cfmimo/rng.hpp"

using namespace cfmimo;

TEST_SUITE_BEGIN("estimation");

TEST_CASE("estimate variance formula: limits and substitution") {
  CHECK(mmse_gain(0.0, 1.0, 1.0) == 0.0);
  CHECK(mmse_gain(3.0, 2.0, 0.0) == doctest::Approx(3.0));  // noiseless pilots are perfect
  CHECK(mmse_gain(1.0, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(mmse_gain(2.0, 1.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("uplink and downlink variances coincide at equal powers, stay within [0, beta]") {
  auto g = make_stream(3, 0, 0);
  MatrixXd beta(6, 5);
  for (Eigen::Index j = 0; j < beta.cols(); ++j)
    for (Eigen::Index i = 0; i < beta.rows(); ++i) beta(i, j) = 2.0 * uniform01(g);
  const MatrixXd a = mmse_gain_matrix(beta, 0.2, 1e-3);
  const MatrixXd p = mmse_gain_matrix(beta, 0.2, 1e-3);
  CHECK((a - p).cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index j = 0; j < beta.cols(); ++j)
    for (Eigen::Index i = 0; i < beta.rows(); ++i) {
      CHECK(a(i, j) >= 0.0);
      CHECK(a(i, j) <= beta(i, j));
    }
}

TEST_CASE("estimate variance increases with pilot power and approaches the limits") {
  const double beta = 0.7;
  double prev = 0.0;
  for (double p = 1e-6; p < 1e7; p *= 10.0) {
    const double a = mmse_gain(beta, p, 1.0);
    CHECK(a >= prev);
    prev = a;
  }
  CHECK(mmse_gain(beta, 1e-12, 1.0) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(mmse_gain(beta, 1e12, 1.0) == doctest::Approx(beta).epsilon(1e-6));
}

TEST_CASE("scalar MMSE estimator: noise-free recovery, zero input, substitution") {
  const cd g_true(0.3, -0.8);
  const double p = 2.0, beta = 1.7;
  const cd pilot(0.6, 0.8);  // unit modulus
  const cd r = std::sqrt(p) * g_true * pilot;
  const cd est = mmse_estimate(r, pilot, beta, p, 0.0);
  CHECK(std::abs(est - g_true) < 1e-12);

  CHECK(mmse_estimate(cd(0, 0), pilot, beta, p, 1.0) == cd(0, 0));
  CHECK(mmse_estimate(cd(2, 0), cd(1, 0), 1.0, 1.0, 1.0) == cd(1, 0));
}

TEST_CASE("joint channel/estimate draw reproduces the exact second moments") {
  // One large matrix of iid entries stands in for 1e5 independent draws.
  const double beta = 1.0, p_u = 1.0, p_d = 0.5, sigma2 = 0.5;
  const double alpha = mmse_gain(beta, p_u, sigma2);
  const double psi = mmse_gain(beta, p_d, sigma2);
  const MatrixXd b = MatrixXd::Constant(500, 200, beta);
  auto g = make_stream(5, 0, 0);
  const RbChannel ch = draw_rb_channel(b, p_u, p_d, sigma2, g);
  const double n = static_cast<double>(b.size());

  const double var_g = ch.g.array().abs2().sum() / n;
  const double var_ul = ch.g_hat_ul.array().abs2().sum() / n;
  const double var_dl = ch.g_hat_dl.array().abs2().sum() / n;
  CHECK(var_g == doctest::Approx(beta).epsilon(0.02));
  CHECK(var_ul / alpha == doctest::Approx(1.0).epsilon(0.02));
  CHECK(var_dl / psi == doctest::Approx(1.0).epsilon(0.02));

  // error variance beta - alpha
  const double err = (ch.g - ch.g_hat_ul).array().abs2().sum() / n;
  CHECK(err == doctest::Approx(beta - alpha).epsilon(0.02));

  // MMSE orthogonality: E[ghat* (g - ghat)] = 0 within 3 standard errors
  const cd cross = (ch.g_hat_ul.conjugate().cwiseProduct(ch.g - ch.g_hat_ul)).sum() / n;
  const double se = std::sqrt(alpha * (beta - alpha) / n);
  CHECK(std::abs(cross.real()) < 3.0 * se);
  CHECK(std::abs(cross.imag()) < 3.0 * se);

  // fourth moment of a complex normal: E|ghat|^4 = 2 alpha^2
  const double fourth = ch.g_hat_ul.array().abs2().square().sum() / n;
  CHECK(fourth / (alpha * alpha) > 1.96);
  CHECK(fourth / (alpha * alpha) < 2.04);
}

TEST_CASE("zero pilot noise makes both estimates exact") {
  const MatrixXd b = MatrixXd::Constant(4, 3, 0.8);
  auto g = make_stream(6, 0, 0);
  const RbChannel ch = draw_rb_channel(b, 0.2, 0.4, 0.0, g);
  CHECK((ch.g - ch.g_hat_ul).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ch.g - ch.g_hat_dl).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_SUITE_END();
