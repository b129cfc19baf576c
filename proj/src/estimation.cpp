#include "cfmimo/estimation.hpp"

#include <cmath>

#include "cfmimo/rng.hpp"

namespace cfmimo {

double mmse_gain(double beta, double p, double sigma2) {
  const double den = p * beta + sigma2;
  if (den <= 0.0) return 0.0;
  return p * beta * beta / den;
}

cd mmse_estimate(cd r, cd pilot, double beta, double p, double sigma2) {
  const double sp = std::sqrt(p);
  const double den = p * beta * std::norm(pilot) + sigma2;
  if (den <= 0.0) return {0.0, 0.0};
  return (sp * beta * std::conj(pilot) / den) * r;
}

MatrixXd mmse_gain_matrix(const MatrixXd& beta, double p, double sigma2) {
  MatrixXd out(beta.rows(), beta.cols());
  for (Eigen::Index j = 0; j < beta.cols(); ++j)
    for (Eigen::Index i = 0; i < beta.rows(); ++i)
      out(i, j) = mmse_gain(beta(i, j), p, sigma2);
  return out;
}

RbChannel draw_rb_channel(const MatrixXd& beta, double p_u, double p_d, double sigma2,
                          std::mt19937_64& g) {
  RbChannel ch;
  const Eigen::Index m = beta.rows(), k = beta.cols();
  ch.g.resize(m, k);
  ch.g_hat_ul.resize(m, k);
  ch.g_hat_dl.resize(m, k);
  const cd pilot{1.0, 0.0};
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < m; ++i) {
      const double b = beta(i, j);
      const cd gij = cnormal(g, b);
      const cd r_ul = std::sqrt(p_u) * gij * pilot + cnormal(g, sigma2);
      const cd r_dl = std::sqrt(p_d) * gij * pilot + cnormal(g, sigma2);
      ch.g(i, j) = gij;
      ch.g_hat_ul(i, j) = mmse_estimate(r_ul, pilot, b, p_u, sigma2);
      ch.g_hat_dl(i, j) = mmse_estimate(r_dl, pilot, b, p_d, sigma2);
    }
  return ch;
}

}  // namespace cfmimo
