#include "cfmimo/selection.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cfmimo {

namespace {
// Indices sorted by descending beta, ties by lowest index.
std::vector<int> descending_order(const VectorXd& beta_col) {
  std::vector<int> idx(static_cast<size_t>(beta_col.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return beta_col(a) > beta_col(b); });
  return idx;
}
}  // namespace

std::vector<int> nearest_aps_fixed(const VectorXd& beta_col, int m_s) {
  if (m_s < 1 || m_s > beta_col.size())
    throw std::invalid_argument("nearest_aps_fixed: m_s out of range");
  auto idx = descending_order(beta_col);
  idx.resize(static_cast<size_t>(m_s));
  return idx;
}

std::vector<int> nearest_aps_threshold(const VectorXd& beta_col, double epsilon) {
  if (epsilon < 0) throw std::invalid_argument("nearest_aps_threshold: epsilon < 0");
  const double cut = epsilon * beta_col.mean();
  std::vector<int> out;
  for (int m : descending_order(beta_col))
    if (beta_col(m) >= cut) out.push_back(m);
  return out;
}

std::vector<std::vector<int>> assign_users_single(int num_users, int num_rbs) {
  std::vector<std::vector<int>> rbs(static_cast<size_t>(num_rbs));
  if (num_users == 0) return rbs;
  for (int b = 0; b < num_rbs; ++b) rbs[static_cast<size_t>(b)] = {b % num_users};
  return rbs;
}

std::vector<std::vector<int>> assign_users_multi(int num_users, int n_u) {
  if (n_u < 1) throw std::invalid_argument("assign_users_multi: n_u < 1");
  std::vector<std::vector<int>> groups;
  for (int start = 0; start < num_users; start += n_u) {
    std::vector<int> g;
    for (int k = start; k < std::min(start + n_u, num_users); ++k) g.push_back(k);
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<int> round_robin_aps(const MatrixXd& beta, const std::vector<int>& users,
                                 int n_ap) {
  const int m = static_cast<int>(beta.rows());
  if (n_ap > m) throw std::invalid_argument("round_robin_aps: n_ap > M");
  // Per-user preference lists; cursor marks the next personal pick.
  std::vector<std::vector<int>> pref;
  pref.reserve(users.size());
  for (int k : users) pref.push_back(descending_order(beta.col(k)));
  std::vector<size_t> cursor(users.size(), 0);
  std::vector<char> taken(static_cast<size_t>(m), 0);
  std::vector<int> picked;
  while (static_cast<int>(picked.size()) < n_ap) {
    bool any = false;
    for (size_t u = 0; u < users.size() && static_cast<int>(picked.size()) < n_ap; ++u) {
      if (cursor[u] >= pref[u].size()) continue;
      const int ap = pref[u][cursor[u]++];
      any = true;
      if (!taken[static_cast<size_t>(ap)]) {
        taken[static_cast<size_t>(ap)] = 1;
        picked.push_back(ap);
      }
    }
    if (!any) break;  // every user exhausted its list
  }
  return picked;
}

std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>> uc_association(
    const MatrixXd& beta, int users_per_ap) {
  const int m = static_cast<int>(beta.rows());
  const int k = static_cast<int>(beta.cols());
  if (users_per_ap < 1 || users_per_ap > k)
    throw std::invalid_argument("uc_association: users_per_ap out of range");
  std::vector<std::vector<int>> user_sets(static_cast<size_t>(m));
  std::vector<std::vector<int>> ap_sets(static_cast<size_t>(k));
  for (int ap = 0; ap < m; ++ap) {
    const VectorXd row = beta.row(ap).transpose();
    user_sets[static_cast<size_t>(ap)] = nearest_aps_fixed(row, users_per_ap);
    std::sort(user_sets[static_cast<size_t>(ap)].begin(), user_sets[static_cast<size_t>(ap)].end());
  }
  for (int ap = 0; ap < m; ++ap)
    for (int u : user_sets[static_cast<size_t>(ap)]) ap_sets[static_cast<size_t>(u)].push_back(ap);
  return {std::move(user_sets), std::move(ap_sets)};
}

std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>
uc_association_user_side(const MatrixXd& beta, int m_s) {
  const int m = static_cast<int>(beta.rows());
  const int k = static_cast<int>(beta.cols());
  std::vector<std::vector<int>> ap_sets(static_cast<size_t>(k));
  std::vector<std::vector<int>> user_sets(static_cast<size_t>(m));
  for (int u = 0; u < k; ++u) {
    ap_sets[static_cast<size_t>(u)] = nearest_aps_fixed(beta.col(u), m_s);
    for (int ap : ap_sets[static_cast<size_t>(u)]) user_sets[static_cast<size_t>(ap)].push_back(u);
  }
  return {std::move(user_sets), std::move(ap_sets)};
}

}  // namespace cfmimo
