#include "cfmimo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "cfmimo/estimation.hpp"
#include "cfmimo/ofdm.hpp"
#include "cfmimo/rng.hpp"

namespace cfmimo {

namespace {

std::vector<int> all_of(int n) {
  std::vector<int> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = i;
  return v;
}

// Channel with its two pilot estimates, drawn from the exact joint law:
// the MMSE estimate of g from a pilot is (v/beta)*g plus an independent
// CN(0, v - v^2/beta) perturbation, where v is the estimate variance. The two
// pilot noises are independent, so the perturbations are too.
struct JointDraw {
  MatrixXcd g, ul, dl;
};

JointDraw draw_joint(const MatrixXd& beta, const MatrixXd& alpha, const MatrixXd& psi,
                     std::mt19937_64& g) {
  const Eigen::Index m_total = beta.rows(), k_total = beta.cols();
  JointDraw jd{MatrixXcd(m_total, k_total), MatrixXcd(m_total, k_total),
               MatrixXcd(m_total, k_total)};
  for (Eigen::Index k = 0; k < k_total; ++k)
    for (Eigen::Index m = 0; m < m_total; ++m) {
      const double b = beta(m, k), a = alpha(m, k), p = psi(m, k);
      const cd ch = cnormal(g, b);
      jd.g(m, k) = ch;
      jd.ul(m, k) = b > 0.0 ? (a / b) * ch + cnormal(g, a - a * a / b) : cd(0, 0);
      jd.dl(m, k) = b > 0.0 ? (p / b) * ch + cnormal(g, p - p * p / b) : cd(0, 0);
    }
  return jd;
}

// Users sharing an RB, per approach. CF/UC put every user on every RB; the
// selective approaches follow the RB assignment.
std::vector<std::vector<int>> user_groups(const SinrInputs& in, bool everyone_together) {
  if (everyone_together) return {all_of(static_cast<int>(in.beta.cols()))};
  return in.sets.rb_users;
}

// CPU combining set for user k in the uplink.
const std::vector<int>& ul_combining_set(const SinrInputs& in, Approach a, int k,
                                         std::vector<int>& scratch_all) {
  switch (a) {
    case Approach::Cf:
      return scratch_all;
    case Approach::Uc:
      return in.sets.uc_ap_sets[static_cast<size_t>(k)];
    case Approach::SuOas:
      return in.sets.per_user_aps[static_cast<size_t>(k)];
    case Approach::MuOas:
      return in.sets.rb_aps[static_cast<size_t>(in.sets.user_rb[static_cast<size_t>(k)])];
  }
  return scratch_all;
}

double dl_closed_form(const SinrInputs& in, DlOracleVariant v, int k) {
  switch (v) {
    case DlOracleVariant::Coherent:
      return downlink_sinr_oas(DlVariant::MuCoherent, k, in);
    case DlOracleVariant::NonCoherent:
      return downlink_sinr_oas(DlVariant::MuNonCoherent, k, in);
    case DlOracleVariant::Su:
      return downlink_sinr_oas(DlVariant::Su, k, in);
    case DlOracleVariant::Cf:
      return downlink_sinr_benchmark(Approach::Cf, k, in);
    case DlOracleVariant::Uc:
      return downlink_sinr_benchmark(Approach::Uc, k, in);
  }
  return 0.0;
}

void finalize(OracleReport& rep, const std::vector<int>& users,
              const std::vector<double>& emp, const std::vector<double>& cf,
              const std::vector<double>& se) {
  const auto n = static_cast<Eigen::Index>(users.size());
  rep.users = users;
  rep.empirical_sinr = VectorXd(n);
  rep.closed_form_sinr = VectorXd(n);
  rep.rel_error = VectorXd(n);
  rep.empirical_se = VectorXd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rep.empirical_sinr(i) = emp[static_cast<size_t>(i)];
    rep.closed_form_sinr(i) = cf[static_cast<size_t>(i)];
    rep.rel_error(i) = cf[static_cast<size_t>(i)] > 0.0
                           ? std::abs(emp[static_cast<size_t>(i)] - cf[static_cast<size_t>(i)]) /
                                 cf[static_cast<size_t>(i)]
                           : std::abs(emp[static_cast<size_t>(i)] - cf[static_cast<size_t>(i)]);
    rep.empirical_se(i) = se[static_cast<size_t>(i)];
  }
}

// Delete-one-block jackknife: recompute the (nonlinear) SINR statistic with
// each realization batch held out; the spread of the leave-out values
// estimates the sampling error of the full estimate. leave_out(i, b) must
// return the statistic for user entry i with batch b removed.
std::vector<double> jackknife_se(size_t n_users, size_t n_batches,
                                 const std::function<double(size_t, size_t)>& leave_out) {
  std::vector<double> se(n_users, std::numeric_limits<double>::infinity());
  if (n_batches < 2) return se;
  const double bf = static_cast<double>(n_batches);
  std::vector<double> theta(n_batches);
  for (size_t i = 0; i < n_users; ++i) {
    double mean = 0.0;
    for (size_t b = 0; b < n_batches; ++b) {
      theta[b] = leave_out(i, b);
      mean += theta[b];
    }
    mean /= bf;
    double ss = 0.0;
    for (double t : theta) ss += (t - mean) * (t - mean);
    se[i] = std::sqrt((bf - 1.0) / bf * ss);
  }
  return se;
}

}  // namespace

OracleReport simulate_uplink_rb(const SinrInputs& in, Approach approach, long num_symbols,
                                int num_realizations, std::mt19937_64& g) {
  if (num_symbols < 1 || num_realizations < 1)
    throw std::invalid_argument("simulate_uplink_rb: need at least one symbol and realization");
  auto everyone = all_of(static_cast<int>(in.beta.rows()));
  const auto groups =
      user_groups(in, approach == Approach::Cf || approach == Approach::Uc);

  std::vector<int> users;
  Eigen::Index max_nu = 1;
  for (const auto& grp : groups) {
    users.insert(users.end(), grp.begin(), grp.end());
    max_nu = std::max(max_nu, static_cast<Eigen::Index>(grp.size()));
  }

  // Sums are kept per realization batch so a jackknife can price the
  // statistical error of the final (nonlinear) estimate.
  const size_t nb = std::min<size_t>(20, static_cast<size_t>(num_realizations));
  std::vector<cd> batch_c(users.size() * nb, cd(0, 0));
  std::vector<double> batch_p2(users.size() * nb, 0.0);
  std::vector<double> batch_n(nb, 0.0);

  // Symbols go through in blocks: one bulk draw, one small matrix product.
  const long blk = std::min<long>(512, num_symbols);
  MatrixXcd s_blk(max_nu, blk), n_blk(max_nu, blk), y_blk(max_nu, blk);
  MatrixXcd c_mat(max_nu, max_nu);  // c_mat(i,j): signal of grp[j] seen by grp[i]
  VectorXd noise_sd(max_nu);

  for (int r = 0; r < num_realizations; ++r) {
    const size_t b =
        static_cast<size_t>(static_cast<long long>(r) * static_cast<long long>(nb) /
                            num_realizations);
    batch_n[b] += 1.0;
    const JointDraw jd = draw_joint(in.beta, in.alpha, in.psi, g);
    size_t entry = 0;
    for (const auto& grp : groups) {
      const auto nu = static_cast<Eigen::Index>(grp.size());
      for (Eigen::Index i = 0; i < nu; ++i) {
        const int k = grp[static_cast<size_t>(i)];
        const auto& aps = ul_combining_set(in, approach, k, everyone);
        double w = 0.0;
        for (Eigen::Index j = 0; j < nu; ++j) {
          const int kp = grp[static_cast<size_t>(j)];
          cd c(0, 0);
          for (int m : aps) c += std::conj(jd.ul(m, k)) * jd.g(m, kp);
          c_mat(i, j) = std::sqrt(in.power.eta_ul(kp)) * c;
        }
        for (int m : aps) w += std::norm(jd.ul(m, k));
        noise_sd(i) = std::sqrt(in.noise_over_pu * w);
        batch_c[(entry + static_cast<size_t>(i)) * nb + b] += c_mat(i, i);
      }
      for (long t0 = 0; t0 < num_symbols; t0 += blk) {
        const long cur = std::min(blk, num_symbols - t0);
        auto s_cur = s_blk.topLeftCorner(nu, cur);
        auto n_cur = n_blk.topLeftCorner(nu, cur);
        fill_cnormal(s_cur, 1.0, g);
        fill_cnormal(n_cur, 1.0, g);
        y_blk.topLeftCorner(nu, cur).noalias() = c_mat.topLeftCorner(nu, nu) * s_cur;
        y_blk.topLeftCorner(nu, cur).noalias() += noise_sd.head(nu).asDiagonal() * n_cur;
        for (Eigen::Index i = 0; i < nu; ++i)
          batch_p2[(entry + static_cast<size_t>(i)) * nb + b] +=
              y_blk.row(i).head(cur).squaredNorm();
      }
      entry += static_cast<size_t>(nu);
    }
  }

  const double rn = static_cast<double>(num_realizations);
  const double sym = static_cast<double>(num_symbols);
  std::vector<double> emp(users.size()), cf(users.size());
  std::vector<cd> sum_c(users.size(), cd(0, 0));
  std::vector<double> sum_p2(users.size(), 0.0);
  for (size_t i = 0; i < users.size(); ++i) {
    for (size_t b = 0; b < nb; ++b) {
      sum_c[i] += batch_c[i * nb + b];
      sum_p2[i] += batch_p2[i * nb + b];
    }
    const double sig = std::norm(sum_c[i] / rn);
    const double total = sum_p2[i] / (rn * sym);
    emp[i] = total > sig ? sig / (total - sig) : 0.0;
    cf[i] = uplink_sinr(approach, users[i], in);
  }
  const auto se = jackknife_se(users.size(), nb, [&](size_t i, size_t b) {
    const double r_out = rn - batch_n[b];
    const double sig = std::norm((sum_c[i] - batch_c[i * nb + b]) / r_out);
    const double total = (sum_p2[i] - batch_p2[i * nb + b]) / (r_out * sym);
    return total > sig ? sig / (total - sig) : 0.0;
  });

  OracleReport rep;
  rep.num_symbols = num_symbols;
  rep.num_realizations = num_realizations;
  finalize(rep, users, emp, cf, se);
  return rep;
}

OracleReport simulate_downlink_rb(const SinrInputs& in, DlOracleVariant variant,
                                  long num_symbols, int num_realizations,
                                  std::mt19937_64& g) {
  if (num_symbols < 1 || num_realizations < 1)
    throw std::invalid_argument("simulate_downlink_rb: need at least one symbol and realization");
  const bool coherent =
      variant == DlOracleVariant::Coherent || variant == DlOracleVariant::Su;
  const bool statistics_alpha =
      variant == DlOracleVariant::Cf || variant == DlOracleVariant::Uc;
  const auto groups = user_groups(in, statistics_alpha);
  const int m_total = static_cast<int>(in.beta.rows());

  std::vector<int> users;
  Eigen::Index max_nu = 1;
  for (const auto& grp : groups) {
    users.insert(users.end(), grp.begin(), grp.end());
    max_nu = std::max(max_nu, static_cast<Eigen::Index>(grp.size()));
  }

  const size_t nb = std::min<size_t>(20, static_cast<size_t>(num_realizations));
  std::vector<double> batch_w(users.size() * nb, 0.0);
  std::vector<double> batch_p2(users.size() * nb, 0.0);
  std::vector<double> batch_n(nb, 0.0);

  const long blk = std::min<long>(512, num_symbols);
  MatrixXcd s_blk(max_nu, blk), n_blk(max_nu, blk), y_blk(max_nu, blk);
  // c_mat(i,j): stream of grp[j] seen by grp[i], with grp[i]'s presumed gain
  // already subtracted on the diagonal, so rows of c_mat * symbols are the
  // detection residuals.
  MatrixXcd c_mat(max_nu, max_nu);
  VectorXd w(max_nu);
  const double noise_sd = std::sqrt(in.noise_over_pd);

  for (int r = 0; r < num_realizations; ++r) {
    const size_t b =
        static_cast<size_t>(static_cast<long long>(r) * static_cast<long long>(nb) /
                            num_realizations);
    batch_n[b] += 1.0;
    const JointDraw jd = draw_joint(in.beta, in.alpha, in.psi, g);
    size_t entry = 0;
    for (const auto& grp : groups) {
      const auto nu = static_cast<Eigen::Index>(grp.size());
      for (Eigen::Index i = 0; i < nu; ++i) {
        const int k = grp[static_cast<size_t>(i)];
        // Every AP with a nonzero power coefficient transmits; zero-filled
        // eta_dl makes the all-AP sum exact for every approach, including
        // interference from APs outside user k's own serving set.
        for (Eigen::Index j = 0; j < nu; ++j) {
          const int kp = grp[static_cast<size_t>(j)];
          cd c(0, 0);
          for (int m = 0; m < m_total; ++m) {
            const double e = in.power.eta_dl(m, kp);
            if (e > 0.0) c += jd.g(m, k) * std::sqrt(e) * std::conj(jd.ul(m, kp));
          }
          c_mat(i, j) = c;
        }
        w(i) = 0.0;
        for (int m = 0; m < m_total; ++m) {
          const double e = in.power.eta_dl(m, k);
          if (e <= 0.0) continue;
          if (coherent)
            w(i) += std::sqrt(e) * std::norm(jd.dl(m, k));
          else if (statistics_alpha)
            w(i) += std::sqrt(e) * in.alpha(m, k);
          else
            w(i) += std::sqrt(e) * in.psi(m, k);
        }
        c_mat(i, i) -= w(i);
        batch_w[(entry + static_cast<size_t>(i)) * nb + b] += w(i);
      }
      for (long t0 = 0; t0 < num_symbols; t0 += blk) {
        const long cur = std::min(blk, num_symbols - t0);
        auto s_cur = s_blk.topLeftCorner(nu, cur);
        auto n_cur = n_blk.topLeftCorner(nu, cur);
        fill_cnormal(s_cur, 1.0, g);
        fill_cnormal(n_cur, 1.0, g);
        y_blk.topLeftCorner(nu, cur).noalias() = c_mat.topLeftCorner(nu, nu) * s_cur;
        y_blk.topLeftCorner(nu, cur).noalias() += noise_sd * n_cur;
        for (Eigen::Index i = 0; i < nu; ++i)
          batch_p2[(entry + static_cast<size_t>(i)) * nb + b] +=
              y_blk.row(i).head(cur).squaredNorm();
      }
      entry += static_cast<size_t>(nu);
    }
  }

  const double rn = static_cast<double>(num_realizations);
  const double sym = static_cast<double>(num_symbols);
  std::vector<double> emp(users.size()), cf(users.size());
  std::vector<double> sum_w(users.size(), 0.0), sum_p2(users.size(), 0.0);
  for (size_t i = 0; i < users.size(); ++i) {
    for (size_t b = 0; b < nb; ++b) {
      sum_w[i] += batch_w[i * nb + b];
      sum_p2[i] += batch_p2[i * nb + b];
    }
    const double mean_w = sum_w[i] / rn;
    const double resid = sum_p2[i] / (rn * sym);
    emp[i] = resid > 0.0 ? mean_w * mean_w / resid : 0.0;
    cf[i] = dl_closed_form(in, variant, users[i]);
  }
  const auto se = jackknife_se(users.size(), nb, [&](size_t i, size_t b) {
    const double r_out = rn - batch_n[b];
    const double mean_w = (sum_w[i] - batch_w[i * nb + b]) / r_out;
    const double resid = (sum_p2[i] - batch_p2[i * nb + b]) / (r_out * sym);
    return resid > 0.0 ? mean_w * mean_w / resid : 0.0;
  });

  OracleReport rep;
  rep.num_symbols = num_symbols;
  rep.num_realizations = num_realizations;
  finalize(rep, users, emp, cf, se);
  return rep;
}

double downlink_sinr_moment_reference(DlOracleVariant variant, int k, const SinrInputs& in) {
  const bool statistics_alpha =
      variant == DlOracleVariant::Cf || variant == DlOracleVariant::Uc;
  const auto groups = user_groups(in, statistics_alpha);
  const std::vector<int>* grp = nullptr;
  for (const auto& cand : groups)
    for (int u : cand)
      if (u == k) grp = &cand;
  if (grp == nullptr) return 0.0;
  const int m_total = static_cast<int>(in.beta.rows());

  double num_gain = 0.0, mismatch = 0.0, var_own = 0.0;
  for (int m = 0; m < m_total; ++m) {
    const double e = in.power.eta_dl(m, k);
    if (e <= 0.0) continue;
    const double b = in.beta(m, k), a = in.alpha(m, k), p = in.psi(m, k);
    switch (variant) {
      case DlOracleVariant::Coherent:
      case DlOracleVariant::Su:
        num_gain += std::sqrt(e) * p;
        mismatch += std::sqrt(e) * (a - p);
        var_own += e * (a * b + p * p * (1.0 - 2.0 * a / b));
        break;
      case DlOracleVariant::NonCoherent:
        num_gain += std::sqrt(e) * p;
        mismatch += std::sqrt(e) * (a - p);
        var_own += e * a * b;
        break;
      case DlOracleVariant::Cf:
      case DlOracleVariant::Uc:
        num_gain += std::sqrt(e) * a;
        var_own += e * a * b;  // equals the k'=k slice of the interference sum
        break;
    }
  }
  double iui = 0.0;
  for (int kp : *grp) {
    if (kp == k) continue;
    for (int m = 0; m < m_total; ++m)
      iui += in.beta(m, k) * in.power.eta_dl(m, kp) * in.alpha(m, kp);
  }
  const double den = var_own + (statistics_alpha ? 0.0 : mismatch * mismatch) + iui +
                     in.noise_over_pd;
  return den > 0.0 ? num_gain * num_gain / den : 0.0;
}

std::vector<TermProbe> probe_uplink_terms(const SinrInputs& in, Approach approach, int k,
                                          int num_realizations, std::mt19937_64& g) {
  auto everyone = all_of(static_cast<int>(in.beta.rows()));
  const auto groups =
      user_groups(in, approach == Approach::Cf || approach == Approach::Uc);
  const std::vector<int>* grp = nullptr;
  for (const auto& cand : groups)
    for (int u : cand)
      if (u == k) grp = &cand;
  if (grp == nullptr) throw std::invalid_argument("probe_uplink_terms: user has no RB");
  const auto& aps = ul_combining_set(in, approach, k, everyone);

  cd mean_gain(0, 0);
  double est_err = 0.0, gain_sum = 0.0, gain_sq = 0.0, iui = 0.0;
  for (int r = 0; r < num_realizations; ++r) {
    const JointDraw jd = draw_joint(in.beta, in.alpha, in.psi, g);
    cd mg(0, 0), ee(0, 0);
    double gf = 0.0;
    for (int m : aps) {
      const cd u = jd.ul(m, k);
      mg += std::conj(u) * jd.g(m, k);
      ee += std::conj(u) * (jd.g(m, k) - u);
      gf += std::norm(u);
    }
    mean_gain += mg;
    est_err += std::norm(ee);
    gain_sum += gf;
    gain_sq += gf * gf;
    for (int kp : *grp) {
      if (kp == k) continue;
      cd c(0, 0);
      for (int m : aps) c += std::conj(jd.ul(m, k)) * jd.g(m, kp);
      iui += in.power.eta_ul(kp) * std::norm(c);
    }
  }
  const double rn = static_cast<double>(num_realizations);

  double a_sum = 0.0, err_sum = 0.0, fluct_sum = 0.0, iui_pred = 0.0;
  for (int m : aps) {
    const double a = in.alpha(m, k), b = in.beta(m, k);
    a_sum += a;
    err_sum += a * (b - a);
    fluct_sum += a * a;
    double w = 0.0;
    for (int kp : *grp)
      if (kp != k) w += in.power.eta_ul(kp) * in.beta(m, kp);
    iui_pred += a * w;
  }

  std::vector<TermProbe> probes;
  probes.push_back({"ul_mean_combining_gain", std::real(mean_gain) / rn, a_sum, a_sum});
  probes.push_back({"ul_estimation_error_power", est_err / rn, err_sum, err_sum});
  probes.push_back(
      {"ul_gain_fluctuation_power", gain_sq / rn - (gain_sum / rn) * (gain_sum / rn),
       fluct_sum, fluct_sum});
  probes.push_back({"ul_interference_power", iui / rn, iui_pred, iui_pred});
  probes.push_back({"ul_noise_weight", gain_sum / rn, a_sum, a_sum});
  return probes;
}

std::vector<TermProbe> probe_downlink_terms(const SinrInputs& in, DlOracleVariant variant,
                                            int k, int num_realizations, std::mt19937_64& g) {
  const bool statistics_alpha =
      variant == DlOracleVariant::Cf || variant == DlOracleVariant::Uc;
  const auto groups = user_groups(in, statistics_alpha);
  const std::vector<int>* grp = nullptr;
  for (const auto& cand : groups)
    for (int u : cand)
      if (u == k) grp = &cand;
  if (grp == nullptr) throw std::invalid_argument("probe_downlink_terms: user has no RB");
  const int m_total = static_cast<int>(in.beta.rows());

  // The user's own serving set (nonzero power), and the tabulated forms'
  // restricted sums over it.
  std::vector<int> own;
  for (int m = 0; m < m_total; ++m)
    if (in.power.eta_dl(m, k) > 0.0) own.push_back(m);

  cd mean_w(0, 0);
  double est_err = 0.0, imbalance = 0.0, cross = 0.0, iui = 0.0;
  double stat_gain_sum = 0.0, stat_gain_sq = 0.0, leak = 0.0;
  for (int r = 0; r < num_realizations; ++r) {
    const JointDraw jd = draw_joint(in.beta, in.alpha, in.psi, g);
    cd x_err(0, 0), x_imb(0, 0);
    double w_coh = 0.0, w_stat = 0.0;
    cd x_leak(0, 0);
    for (int m = 0; m < m_total; ++m) {
      const double e = in.power.eta_dl(m, k);
      if (e > 0.0) {
        const double se = std::sqrt(e);
        const cd u = jd.ul(m, k);
        x_err += se * (jd.g(m, k) - u) * std::conj(u);
        x_imb += se * (std::norm(u) - std::norm(jd.dl(m, k)));
        w_coh += se * std::norm(jd.dl(m, k));
        w_stat += se * std::norm(u);
      }
    }
    // statistics-mode leakage: estimation error times every precoded stream
    for (int m = 0; m < m_total; ++m) {
      cd tx(0, 0);
      for (int kp : *grp) {
        const double e = in.power.eta_dl(m, kp);
        if (e > 0.0) tx += std::sqrt(e) * std::conj(jd.ul(m, kp));
      }
      x_leak += (jd.g(m, k) - jd.ul(m, k)) * tx;
    }
    mean_w += statistics_alpha ? cd(w_stat, 0) : cd(w_coh, 0);
    est_err += std::norm(x_err);
    imbalance += std::norm(x_imb);
    cross += 2.0 * std::real(x_err * std::conj(x_imb));
    stat_gain_sum += w_stat;
    stat_gain_sq += w_stat * w_stat;
    leak += std::norm(x_leak);
    for (int kp : *grp) {
      if (kp == k) continue;
      cd c(0, 0);
      for (int m = 0; m < m_total; ++m) {
        const double e = in.power.eta_dl(m, kp);
        if (e > 0.0) {
          const cd hat = statistics_alpha ? jd.ul(m, k) : jd.g(m, k);
          c += hat * std::sqrt(e) * std::conj(jd.ul(m, kp));
        }
      }
      iui += std::norm(c);
    }
  }
  const double rn = static_cast<double>(num_realizations);

  // Tabulated predictions (restricted to the user's own set where the tables
  // restrict them) and exact-moment predictions (full transmit sums).
  double mean_pred = 0.0, err_pred = 0.0, imb_printed = 0.0, imb_derived = 0.0;
  double cross_derived = 0.0, fluct_pred = 0.0, mism = 0.0;
  for (int m : own) {
    const double e = in.power.eta_dl(m, k), se = std::sqrt(e);
    const double b = in.beta(m, k), a = in.alpha(m, k), p = in.psi(m, k);
    mean_pred += statistics_alpha ? se * a : se * p;
    err_pred += e * a * (b - a);
    imb_printed += e * (p - a) * (p - a);
    imb_derived += e * (a * a + p * p - 2.0 * a * a * p * p / (b * b));
    mism += se * (a - p);
    cross_derived += 2.0 * e * (a * a * p * p / (b * b) - a * p * p / b);
    fluct_pred += e * a * a;
  }
  imb_derived += mism * mism;

  double iui_printed = 0.0, iui_derived = 0.0, leak_printed = 0.0, leak_derived = 0.0;
  for (int kp : *grp) {
    if (kp == k) continue;
    for (int m = 0; m < m_total; ++m) {
      const double t = in.power.eta_dl(m, kp) * in.alpha(m, kp);
      const double gain = statistics_alpha ? in.alpha(m, k) : in.beta(m, k);
      iui_derived += gain * t;
    }
    for (int m : own) {
      const double t = in.power.eta_dl(m, kp) * in.alpha(m, kp);
      iui_printed += (statistics_alpha ? in.alpha(m, k) : in.beta(m, k)) * t;
    }
  }
  for (int m = 0; m < m_total; ++m) {
    double t = 0.0;
    for (int kp : *grp) t += in.power.eta_dl(m, kp) * in.alpha(m, kp);
    leak_derived += (in.beta(m, k) - in.alpha(m, k)) * t;
  }
  for (int m : own) {
    double t = 0.0;
    for (int kp : *grp) t += in.power.eta_dl(m, kp) * in.alpha(m, kp);
    leak_printed += (in.beta(m, k) - in.alpha(m, k)) * t;
  }

  std::vector<TermProbe> probes;
  if (statistics_alpha) {
    probes.push_back({"dl_mean_statistics_gain", std::real(mean_w) / rn, mean_pred, mean_pred});
    probes.push_back(
        {"dl_gain_uncertainty_power",
         stat_gain_sq / rn - (stat_gain_sum / rn) * (stat_gain_sum / rn), fluct_pred,
         fluct_pred});
    probes.push_back({"dl_estimate_interference_power", iui / rn, iui_printed, iui_derived});
    probes.push_back({"dl_estimation_leakage_power", leak / rn, leak_printed, leak_derived});
  } else {
    probes.push_back({"dl_mean_detection_gain", std::real(mean_w) / rn,
                      mean_pred, mean_pred});
    probes.push_back({"dl_estimation_error_power", est_err / rn, err_pred, err_pred});
    probes.push_back({"dl_gain_imbalance_power", imbalance / rn, imb_printed, imb_derived});
    probes.push_back({"dl_imbalance_error_correlation", cross / rn, 0.0, cross_derived});
    probes.push_back({"dl_interference_power", iui / rn, iui_printed, iui_derived});
  }
  return probes;
}

OracleReport simulate_waveform_rb(const SinrInputs& in, DlOracleVariant variant,
                                  const WaveformParams& params, std::mt19937_64& g) {
  const int n = params.num_subcarriers, l_cp = params.cp_length, l = params.num_taps;
  if (n < 1 || l < 1 || l_cp < 0 || l > n)
    throw std::invalid_argument("simulate_waveform_rb: bad OFDM dimensions");
  if (l > l_cp && !params.allow_insufficient_cp)
    throw std::invalid_argument(
        "simulate_waveform_rb: channel memory exceeds the cyclic prefix");
  if (variant == DlOracleVariant::NonCoherent)
    throw std::invalid_argument("simulate_waveform_rb: unsupported variant");
  const bool coherent =
      variant == DlOracleVariant::Coherent || variant == DlOracleVariant::Su;
  const auto groups = user_groups(
      in, variant == DlOracleVariant::Cf || variant == DlOracleVariant::Uc);
  if (groups.size() != 1)
    throw std::invalid_argument("simulate_waveform_rb: expects a single RB group");
  const auto& grp = groups[0];
  const int m_total = static_cast<int>(in.beta.rows());
  const int t_syms = params.num_ofdm_symbols;
  const int block = n + l_cp;

  const MatrixXcd d_mat = dft_matrix(n);
  const MatrixXcd d_inv = d_mat.adjoint() / static_cast<double>(n);
  const VectorXcd pilot_time = add_cp(d_inv * VectorXcd::Ones(n), l_cp);
  std::mt19937_64 silent(0);

  const size_t nb = std::min<size_t>(20, static_cast<size_t>(params.num_realizations));
  std::vector<double> batch_w(grp.size() * nb, 0.0);
  std::vector<double> batch_p2(grp.size() * nb, 0.0);
  std::vector<double> batch_n(nb, 0.0);

  for (int r = 0; r < params.num_realizations; ++r) {
    const size_t bat =
        static_cast<size_t>(static_cast<long long>(r) * static_cast<long long>(nb) /
                            params.num_realizations);
    batch_n[bat] += 1.0;
    // per-link multipath channels with total power beta
    std::vector<TapChannel> ch(static_cast<size_t>(m_total * grp.size()));
    for (size_t i = 0; i < grp.size(); ++i)
      for (int m = 0; m < m_total; ++m) {
        TapChannel c;
        c.taps = VectorXcd(l);
        for (int tap = 0; tap < l; ++tap) c.taps(tap) = cnormal(g, 1.0 / l);
        c.large_scale = in.beta(m, grp[i]);
        ch[static_cast<size_t>(m) * grp.size() + i] = std::move(c);
      }

    // pilot estimation through the full time-domain chain, per subcarrier
    MatrixXcd est_ul(m_total, static_cast<int>(grp.size()) * n);
    MatrixXcd est_dl(m_total, static_cast<int>(grp.size()) * n);
    for (size_t i = 0; i < grp.size(); ++i) {
      const int k = grp[i];
      for (int m = 0; m < m_total; ++m) {
        const auto& link = ch[static_cast<size_t>(m) * grp.size() + i];
        for (int dir = 0; dir < 2; ++dir) {
          const double nv = dir == 0 ? in.noise_over_pu : in.noise_over_pd;
          VectorXcd rx = channel_apply(pilot_time, link, 0.0, silent);
          VectorXcd nz(rx.size());
          fill_cnormal(nz, nv / n, g);
          rx += nz;
          const VectorXcd rf = d_mat * remove_cp(rx, l_cp);
          auto& dst = dir == 0 ? est_ul : est_dl;
          for (int sc = 0; sc < n; ++sc)
            dst(m, static_cast<int>(i) * n + sc) =
                mmse_estimate(rf(sc), cd(1, 0), in.beta(m, k), 1.0, nv);
        }
      }
    }

    // data phase: precode per subcarrier, stream through the channel with a
    // cyclic prefix per symbol and one continuous convolution per link
    std::vector<MatrixXcd> data(grp.size());
    for (auto& d : data) {
      d = MatrixXcd(n, t_syms);
      fill_cnormal(d, 1.0, g);
    }
    std::vector<VectorXcd> stream(static_cast<size_t>(m_total),
                                  VectorXcd::Zero(static_cast<Eigen::Index>(block) * t_syms));
    for (int m = 0; m < m_total; ++m) {
      bool active = false;
      for (size_t j = 0; j < grp.size(); ++j)
        if (in.power.eta_dl(m, grp[j]) > 0.0) active = true;
      if (!active) continue;
      VectorXcd xf(n);
      for (int t = 0; t < t_syms; ++t) {
        xf.setZero();
        for (size_t j = 0; j < grp.size(); ++j) {
          const double e = in.power.eta_dl(m, grp[j]);
          if (e <= 0.0) continue;
          const double se = std::sqrt(e);
          for (int sc = 0; sc < n; ++sc)
            xf(sc) += se * std::conj(est_ul(m, static_cast<int>(j) * n + sc)) * data[j](sc, t);
        }
        stream[static_cast<size_t>(m)].segment(static_cast<Eigen::Index>(t) * block, block) =
            add_cp(d_inv * xf, l_cp);
      }
    }

    for (size_t i = 0; i < grp.size(); ++i) {
      VectorXcd rx = VectorXcd::Zero(static_cast<Eigen::Index>(block) * t_syms);
      for (int m = 0; m < m_total; ++m)
        rx += channel_apply(stream[static_cast<size_t>(m)],
                            ch[static_cast<size_t>(m) * grp.size() + i], 0.0, silent);
      VectorXcd nz(rx.size());
      fill_cnormal(nz, in.noise_over_pd / n, g);
      rx += nz;

      // per-subcarrier presumed gain
      VectorXd w(n);
      for (int sc = 0; sc < n; ++sc) {
        double acc = 0.0;
        for (int m = 0; m < m_total; ++m) {
          const double e = in.power.eta_dl(m, grp[i]);
          if (e <= 0.0) continue;
          acc += coherent ? std::sqrt(e) * std::norm(est_dl(m, static_cast<int>(i) * n + sc))
                          : std::sqrt(e) * in.alpha(m, grp[i]);
        }
        w(sc) = acc;
        batch_w[i * nb + bat] += acc;
      }
      for (int t = 0; t < t_syms; ++t) {
        const VectorXcd yf =
            d_mat * remove_cp(rx.segment(static_cast<Eigen::Index>(t) * block, block), l_cp);
        // yf already carries the interference of the other users' streams
        for (int sc = 0; sc < n; ++sc)
          batch_p2[i * nb + bat] += std::norm(yf(sc) - w(sc) * data[i](sc, t));
      }
    }
  }

  std::vector<double> emp(grp.size()), cf(grp.size());
  std::vector<double> sum_w(grp.size(), 0.0), sum_p2(grp.size(), 0.0);
  const double w_count = static_cast<double>(params.num_realizations) * n;
  const double p_count = w_count * t_syms;
  for (size_t i = 0; i < grp.size(); ++i) {
    for (size_t b = 0; b < nb; ++b) {
      sum_w[i] += batch_w[i * nb + b];
      sum_p2[i] += batch_p2[i * nb + b];
    }
    const double mean_w = sum_w[i] / w_count;
    const double resid = sum_p2[i] / p_count;
    emp[i] = resid > 0.0 ? mean_w * mean_w / resid : 0.0;
    cf[i] = dl_closed_form(in, variant, grp[i]);
  }
  const auto se = jackknife_se(grp.size(), nb, [&](size_t i, size_t b) {
    const double wc = (static_cast<double>(params.num_realizations) - batch_n[b]) * n;
    const double mean_w = (sum_w[i] - batch_w[i * nb + b]) / wc;
    const double resid = (sum_p2[i] - batch_p2[i * nb + b]) / (wc * t_syms);
    return resid > 0.0 ? mean_w * mean_w / resid : 0.0;
  });
  OracleReport rep;
  rep.num_symbols = static_cast<long>(t_syms) * n;
  rep.num_realizations = params.num_realizations;
  finalize(rep, grp, emp, cf, se);
  return rep;
}

}  // namespace cfmimo
