#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "curvegame/core.hpp"

namespace curvegame {

/// Absolute tolerance on efforts when checking a profile against replies.
inline constexpr double kVerifyTolerance = 1e-9;
/// Existence margins within this distance of zero are flagged as marginal.
inline constexpr double kMarginalBand = 1e-9;

/// alpha_hat_n = n - HarmonicMean(n - alpha_1, ..., n - alpha_n).
struct AbilityIndex {
  double value;
  std::size_t n;
};

AbilityIndex ability_index(const GameParams& params);

/// Players sorted by (ability, original index); position t holds the player
/// with the (t+1)-th order statistic.
std::vector<std::size_t> ability_order(const GameParams& params);

/// A closed-form candidate. Efforts are kept raw: when the candidate is not
/// an equilibrium the formulas may leave [0, 1].
struct Candidate {
  std::vector<double> efforts;
  double mean;

  bool feasible() const;
  /// Throws std::invalid_argument when !feasible().
  Profile profile() const { return Profile(efforts); }
};

/// Curved interior profile; says nothing about whether it is an equilibrium.
Candidate curved_interior_candidate(const GameParams& params);

/// Bottom k students at zero, the rest at the don't-care formula.
/// k = 0 reproduces curved_interior_candidate, k = n the zero profile.
Candidate k_dont_care_candidate(const GameParams& params, std::size_t k);

/// delta(z) = 1 - (1 + n/(n-1) (m - z))^-1.
double dont_care_statistic(const GameParams& params, double mean);

struct NoCurveExistence {
  bool exists;
  bool marginal;
  double threshold;  // (1/n) max_i [(n-1) J_i + a_i]
  double slack;      // mean ability - threshold
};

NoCurveExistence exists_no_curve(const GameParams& params);

struct KDontCareExistence {
  std::size_t k;
  bool exists;
  bool marginal;
  /// Printed two-sided test lower <= statistic < upper. For k = 0 the
  /// statistic is n(m - xbar*); for 0 < k < n it is delta(xbar^(k)); for
  /// k = n it is alpha_(n) against upper = m/(m + 1 - 1/n) with a weak
  /// inequality.
  double lower;
  double statistic;
  double upper;
  bool printed_condition;
  /// Every positive-effort player's opponents' mean stays at or below J_i.
  /// Implied by the printed test for k = 0 and k = n; checked separately in
  /// between.
  bool jump_condition;
  double jump_slack;  // min_i (J_i - xbar_-i) over positive-effort players
};

KDontCareExistence exists_k_dont_care(const GameParams& params,
                                      std::size_t k);

struct EquilibriumKind {
  enum class Tag { NoCurve, KDontCare };
  Tag tag;
  std::size_t k = 0;

  static EquilibriumKind no_curve() { return {Tag::NoCurve, 0}; }
  static EquilibriumKind dont_care(std::size_t k) { return {Tag::KDontCare, k}; }

  /// "no_curve" or "k_dont_care:<k>".
  std::string label() const;
  bool operator==(const EquilibriumKind&) const = default;
};

struct EquilibriumRecord {
  EquilibriumKind kind;
  Profile profile;
  double mean;
  std::vector<Allocation> allocations;
  std::vector<double> utilities;
  bool verified;
  bool marginal;
};

/// Every effort sits in the player's reply set within kVerifyTolerance.
bool is_fixed_point(const GameParams& params, const Profile& x);

EquilibriumRecord make_record(const GameParams& params, EquilibriumKind kind,
                              Profile profile, bool marginal);

/// All pure Nash equilibria, highest effort first.
///
/// Each closed-form candidate is tested by its existence condition and by a
/// direct fixed-point check; a disagreement outside the marginal band throws
/// ConsistencyError, as does a pair of records that is not coordinatewise
/// comparable.
std::vector<EquilibriumRecord> enumerate_equilibria(const GameParams& params);

enum class Order { Less, Equal, Greater };

const char* to_string(Order o);

struct ParetoReport {
  Order effort;  // a relative to b, coordinatewise
  std::vector<Order> utility;
  /// Filled only for two don't-care records.
  std::optional<std::vector<Order>> grade;
  std::optional<std::vector<Order>> leisure;
  /// The lower-effort record is weakly better for everyone.
  bool low_effort_pareto_dominates;
};

/// Throws ConsistencyError if the efforts are not comparable.
ParetoReport pareto_compare(const GameParams& params,
                            const EquilibriumRecord& a,
                            const EquilibriumRecord& b, double tol = 1e-12);

struct InflationEntry {
  double alpha;
  double effort;
  double leisure;
  double grade;
  double leisure_ratio;
  double grade_ratio;
  double inferred_alpha;
};

struct InflationReport {
  double alpha_hat;
  double m;
  bool curved;
  double factor;
  double mean_effort;
  std::vector<InflationEntry> students;
  std::string note;
};

/// Large-class curved equilibrium: grades and leisure both scale by
/// m / alpha_hat. With alpha_hat > m the limit has no curve and the factor is
/// reported as 1.
InflationReport asymptotic_report(double alpha_hat, double m,
                                  const std::vector<double>& abilities = {});

/// Replies of the lone student in a one-person class: a, 0, or both at the
/// cutoff m = a (1 - a)^((1-a)/a).
std::vector<double> solve_single_student(double alpha, double m);

double single_student_cutoff(double alpha);

}  // namespace curvegame
