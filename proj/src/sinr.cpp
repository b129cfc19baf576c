#include "cfmimo/sinr.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cfmimo {

namespace {

std::vector<int> all_indices(int n) {
  std::vector<int> v(static_cast<size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// gamma = eta_k (sum_A alpha)^2 / [sum_A alpha_mk sum_U eta_k' beta_mk' + (s2/pu) sum_A alpha]
double uplink_kernel(const SinrInputs& in, const std::vector<int>& aps,
                     const std::vector<int>& users, int k) {
  if (aps.empty()) return 0.0;
  double sum_a = 0.0, iui = 0.0;
  for (int m : aps) {
    const double a = in.alpha(m, k);
    sum_a += a;
    double w = 0.0;
    for (int u : users) w += in.power.eta_ul(u) * in.beta(m, u);
    iui += a * w;
  }
  const double num = in.power.eta_ul(k) * sum_a * sum_a;
  const double den = iui + in.noise_over_pu * sum_a;
  return den > 0.0 ? num / den : 0.0;
}

// Interference floor shared by all downlink forms:
// sum_{m in A} beta_mk sum_{k' in U} eta_mk' alpha_mk'
double dl_iui(const SinrInputs& in, const std::vector<int>& aps,
              const std::vector<int>& users, int k) {
  double iui = 0.0;
  for (int m : aps) {
    double w = 0.0;
    for (int u : users) w += in.power.eta_dl(m, u) * in.alpha(m, u);
    iui += in.beta(m, k) * w;
  }
  return iui;
}

double dl_gain(const SinrInputs& in, const std::vector<int>& aps, int k,
               const MatrixXd& est_var) {
  double s = 0.0;
  for (int m : aps) s += std::sqrt(in.power.eta_dl(m, k)) * est_var(m, k);
  return s * s;
}

}  // namespace

PowerAllocation full_power_allocation(Approach approach, const SelectionPlan& sets,
                                      const MatrixXd& alpha) {
  const int m_total = static_cast<int>(alpha.rows());
  const int k_total = static_cast<int>(alpha.cols());
  PowerAllocation pw;
  pw.eta_ul = VectorXd::Ones(k_total);
  pw.eta_dl = MatrixXd::Zero(m_total, k_total);

  auto spread = [&](int m, const std::vector<int>& served) {
    double s = 0.0;
    for (int u : served) s += alpha(m, u);
    if (s <= 0.0) return;
    for (int u : served) pw.eta_dl(m, u) = 1.0 / s;
  };

  switch (approach) {
    case Approach::Cf: {
      const auto everyone = all_indices(k_total);
      for (int m = 0; m < m_total; ++m) spread(m, everyone);
      break;
    }
    case Approach::Uc:
      for (int m = 0; m < m_total; ++m) spread(m, sets.uc_user_sets[static_cast<size_t>(m)]);
      break;
    case Approach::SuOas:
      for (int k = 0; k < k_total; ++k)
        for (int m : sets.per_user_aps[static_cast<size_t>(k)])
          if (alpha(m, k) > 0.0) pw.eta_dl(m, k) = 1.0 / alpha(m, k);
      break;
    case Approach::MuOas:
      for (size_t b = 0; b < sets.rb_aps.size(); ++b)
        for (int m : sets.rb_aps[b]) spread(m, sets.rb_users[b]);
      break;
  }
  return pw;
}

double uplink_sinr(Approach approach, int k, const SinrInputs& in) {
  const int m_total = static_cast<int>(in.beta.rows());
  const int k_total = static_cast<int>(in.beta.cols());
  switch (approach) {
    case Approach::Cf:
      return uplink_kernel(in, all_indices(m_total), all_indices(k_total), k);
    case Approach::Uc:
      return uplink_kernel(in, in.sets.uc_ap_sets[static_cast<size_t>(k)],
                           all_indices(k_total), k);
    case Approach::SuOas:
      return uplink_kernel(in, in.sets.per_user_aps[static_cast<size_t>(k)], {k}, k);
    case Approach::MuOas: {
      const int b = in.sets.user_rb[static_cast<size_t>(k)];
      if (b < 0) return 0.0;
      return uplink_kernel(in, in.sets.rb_aps[static_cast<size_t>(b)],
                           in.sets.rb_users[static_cast<size_t>(b)], k);
    }
  }
  return 0.0;
}

double downlink_sinr_oas(DlVariant variant, int k, const SinrInputs& in) {
  if (variant == DlVariant::Su) {
    const auto& aps = in.sets.per_user_aps[static_cast<size_t>(k)];
    if (aps.empty()) return 0.0;
    const double num = dl_gain(in, aps, k, in.psi);
    double theta = in.noise_over_pd;
    for (int m : aps) {
      const double e = in.power.eta_dl(m, k);
      const double a = in.alpha(m, k), b = in.beta(m, k), p = in.psi(m, k);
      theta += e * (b - a) * a + e * (p - a) * (p - a);
    }
    return theta > 0.0 ? num / theta : 0.0;
  }

  const int b = in.sets.user_rb[static_cast<size_t>(k)];
  if (b < 0) return 0.0;
  const auto& aps = in.sets.rb_aps[static_cast<size_t>(b)];
  const auto& users = in.sets.rb_users[static_cast<size_t>(b)];
  if (aps.empty()) return 0.0;

  const double num = dl_gain(in, aps, k, in.psi);
  double den = dl_iui(in, aps, users, k) + in.noise_over_pd;
  for (int m : aps) {
    const double e = in.power.eta_dl(m, k);
    const double a = in.alpha(m, k), p = in.psi(m, k);
    if (variant == DlVariant::MuCoherent)
      den += e * (p * p - 2.0 * p * a);
    else
      den += 2.0 * e * (p * p - p * a);
  }
  return den > 0.0 ? num / den : 0.0;
}

double downlink_sinr_benchmark(Approach approach, int k, const SinrInputs& in) {
  const int m_total = static_cast<int>(in.beta.rows());
  const int k_total = static_cast<int>(in.beta.cols());
  std::vector<int> aps;
  if (approach == Approach::Cf) {
    aps = all_indices(m_total);
  } else if (approach == Approach::Uc) {
    aps = in.sets.uc_ap_sets[static_cast<size_t>(k)];
  } else {
    throw std::invalid_argument("downlink_sinr_benchmark: approach must be CF or UC");
  }
  if (aps.empty()) return 0.0;
  const double num = dl_gain(in, aps, k, in.alpha);
  const double den = dl_iui(in, aps, all_indices(k_total), k) + in.noise_over_pd;
  return den > 0.0 ? num / den : 0.0;
}

double spectral_efficiency(double gamma) { return std::log2(1.0 + gamma); }

}  // namespace cfmimo
