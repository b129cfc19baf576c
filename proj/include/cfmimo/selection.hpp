#pragma once

#include <vector>

#include "cfmimo/types.hpp"

namespace cfmimo {

// Association state for one drop. Which fields are populated depends on the
// transmission approach; index vectors are 0-based.
struct SelectionPlan {
  std::vector<std::vector<int>> per_user_aps;  // serving APs per user, strongest first
  std::vector<std::vector<int>> rb_users;      // users sharing each RB
  std::vector<std::vector<int>> rb_aps;        // active APs per RB
  std::vector<std::vector<int>> uc_user_sets;  // users served by each AP
  std::vector<std::vector<int>> uc_ap_sets;    // APs serving each user
  std::vector<int> user_rb;                    // RB index per user, -1 if unassigned
};

// The m_s strongest APs for one user, ordered by descending beta, ties broken
// by lowest index. Throws std::invalid_argument if m_s > M.
std::vector<int> nearest_aps_fixed(const VectorXd& beta_col, int m_s);

// All APs with beta >= epsilon * mean(beta), ordered like nearest_aps_fixed.
std::vector<int> nearest_aps_threshold(const VectorXd& beta_col, double epsilon);

// One user per RB, cyclically. B >= K covers every user at least once.
std::vector<std::vector<int>> assign_users_single(int num_users, int num_rbs);

// Consecutive groups of n_u users; the last group may be smaller.
std::vector<std::vector<int>> assign_users_multi(int num_users, int n_u);

// Users take turns picking their strongest not-yet-personally-picked AP;
// duplicates across users merge. Stops at n_ap distinct APs (or when every
// user has picked all M). Output in pick order.
std::vector<int> round_robin_aps(const MatrixXd& beta, const std::vector<int>& users,
                                 int n_ap);

// AP-side association: each AP serves its users_per_ap strongest users.
// Returns {users per AP, APs per user}; a user may end up with no APs.
std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>> uc_association(
    const MatrixXd& beta, int users_per_ap);

// User-side association: each user takes its m_s strongest APs and the AP-side
// sets are derived by membership. Used for like-for-like comparisons where
// every approach selects the same number of APs per user.
std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>
uc_association_user_side(const MatrixXd& beta, int m_s);

}  // namespace cfmimo
