#include "curvegame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "curvegame/response.hpp"

namespace curvegame {

namespace {

void require_multiplayer(const GameParams& params) {
  if (params.size() < 2) {
    throw std::domain_error("equilibrium analysis needs at least two students");
  }
}

Order compare(double a, double b, double tol) {
  if (std::abs(a - b) <= tol) return Order::Equal;
  return a < b ? Order::Less : Order::Greater;
}

bool near_boundary(double value, double bound) {
  return std::abs(value - bound) <= kMarginalBand;
}

}  // namespace

bool Candidate::feasible() const {
  return std::all_of(efforts.begin(), efforts.end(),
                     [](double v) { return v >= 0.0 && v <= 1.0; });
}

AbilityIndex ability_index(const GameParams& params) {
  const double n = static_cast<double>(params.size());
  double s1 = 0.0;
  double s2 = 0.0;
  for (double a : params.alphas()) {
    s1 += a / (n - a);
    s2 += 1.0 / (n - a);
  }
  // n (1 - 1/S2) rewritten with S1 = n (S2 - 1) to avoid cancellation at
  // large n.
  return {s1 / s2, params.size()};
}

std::vector<std::size_t> ability_order(const GameParams& params) {
  std::vector<std::size_t> order(params.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return params.alpha(a) < params.alpha(b);
                   });
  return order;
}

Candidate curved_interior_candidate(const GameParams& params) {
  require_multiplayer(params);
  const double n = static_cast<double>(params.size());
  const double m = params.target_mean();
  const double ahat = ability_index(params).value;
  const double mean = 1.0 - n * m / (n - 1.0) * (1.0 / ahat - 1.0);

  std::vector<double> x(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double a = params.alpha(i);
    x[i] = ((n - 1.0) * a - n * (1.0 - a) * (m - mean)) / (n - a);
  }
  return {std::move(x), mean};
}

Candidate k_dont_care_candidate(const GameParams& params, std::size_t k) {
  require_multiplayer(params);
  const std::size_t size = params.size();
  if (k > size) throw std::out_of_range("k exceeds class size");
  const double n = static_cast<double>(size);
  const double m = params.target_mean();
  const std::vector<std::size_t> order = ability_order(params);

  std::vector<double> x(size, 0.0);
  if (k == size) return {std::move(x), 0.0};

  double s2 = 0.0;
  for (std::size_t t = k; t < size; ++t) s2 += 1.0 / (n - params.alpha(order[t]));
  const double kk = static_cast<double>(k);
  const double mean =
      ((n - 1.0) * (m + 1.0) * s2 - (n - kk) * (m + 1.0 - 1.0 / n)) /
      ((n - 1.0) * (s2 - 1.0) + kk);

  for (std::size_t t = k; t < size; ++t) {
    const std::size_t i = order[t];
    const double a = params.alpha(i);
    x[i] = ((n - 1.0) * a - n * (1.0 - a) * (m - mean)) / (n - a);
  }
  return {std::move(x), mean};
}

double dont_care_statistic(const GameParams& params, double mean) {
  const double n = static_cast<double>(params.size());
  return 1.0 - 1.0 / (1.0 + n / (n - 1.0) * (params.target_mean() - mean));
}

NoCurveExistence exists_no_curve(const GameParams& params) {
  require_multiplayer(params);
  const double n = static_cast<double>(params.size());
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < params.size(); ++i) {
    worst = std::max(worst, (n - 1.0) * jump_point(params, i) + params.alpha(i));
  }
  const double threshold = worst / n;
  const double slack = params.mean_ability() - threshold;
  return {slack >= 0.0, std::abs(slack) <= kMarginalBand, threshold, slack};
}

KDontCareExistence exists_k_dont_care(const GameParams& params,
                                      std::size_t k) {
  require_multiplayer(params);
  const std::size_t size = params.size();
  if (k > size) throw std::out_of_range("k exceeds class size");
  const double n = static_cast<double>(size);
  const double m = params.target_mean();
  const std::vector<std::size_t> order = ability_order(params);
  auto order_stat = [&](std::size_t pos) { return params.alpha(order[pos - 1]); };

  KDontCareExistence out{};
  out.k = k;

  if (k == size) {
    out.lower = 0.0;
    out.statistic = order_stat(size);
    out.upper = m / (m + 1.0 - 1.0 / n);
    out.printed_condition = out.statistic <= out.upper;
    out.jump_condition = true;
    out.jump_slack = std::numeric_limits<double>::infinity();
    out.exists = out.printed_condition;
    out.marginal = near_boundary(out.statistic, out.upper);
    return out;
  }

  const Candidate cand = k == 0 ? curved_interior_candidate(params)
                                : k_dont_care_candidate(params, k);

  if (k == 0) {
    double lower = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size; ++i) {
      const double a = params.alpha(i);
      lower = std::max(lower,
                       (n - a) * (n * m / (n - 1.0) - jump_point(params, i)) - a);
    }
    const double a1 = order_stat(1);
    out.lower = lower;
    out.statistic = n * (m - cand.mean);
    out.upper = (n - 1.0) * a1 / (1.0 - a1);
  } else {
    out.lower = order_stat(k);
    out.statistic = dont_care_statistic(params, cand.mean);
    out.upper = order_stat(k + 1);
  }
  out.printed_condition =
      out.lower <= out.statistic && out.statistic < out.upper;

  double jump_slack = std::numeric_limits<double>::infinity();
  for (std::size_t t = k; t < size; ++t) {
    const std::size_t i = order[t];
    const double opposing = (n * cand.mean - cand.efforts[i]) / (n - 1.0);
    jump_slack = std::min(jump_slack, jump_point(params, i) - opposing);
  }
  out.jump_slack = jump_slack;
  out.jump_condition = jump_slack >= 0.0;

  out.exists = out.printed_condition && (k == 0 || out.jump_condition);
  out.marginal = near_boundary(out.statistic, out.lower) ||
                 near_boundary(out.statistic, out.upper) ||
                 (k > 0 && std::abs(jump_slack) <= kMarginalBand);
  return out;
}

std::string EquilibriumKind::label() const {
  if (tag == Tag::NoCurve) return "no_curve";
  return "k_dont_care:" + std::to_string(k);
}

bool is_fixed_point(const GameParams& params, const Profile& x) {
  require_multiplayer(params);
  if (x.size() != params.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const BestResponse br = best_response(params, i, x.opposing_mean(i));
    if (!br.contains(x[i], kVerifyTolerance)) return false;
  }
  return true;
}

EquilibriumRecord make_record(const GameParams& params, EquilibriumKind kind,
                              Profile profile, bool marginal) {
  EquilibriumRecord rec{kind, profile, profile.mean(), {}, {}, false, marginal};
  rec.allocations.reserve(profile.size());
  rec.utilities.reserve(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    rec.allocations.push_back(allocation(params, profile, i));
    rec.utilities.push_back(utility(params, profile, i));
  }
  rec.verified = is_fixed_point(params, profile);
  return rec;
}

std::vector<EquilibriumRecord> enumerate_equilibria(const GameParams& params) {
  require_multiplayer(params);
  std::vector<EquilibriumRecord> found;

  auto admit = [&](EquilibriumKind kind, bool exists, bool marginal,
                   const std::vector<double>& efforts) {
    const bool feasible =
        std::all_of(efforts.begin(), efforts.end(),
                    [](double v) { return v >= 0.0 && v <= 1.0; });
    const bool verified = feasible && is_fixed_point(params, Profile(efforts));
    if (!marginal && exists != verified) {
      throw ConsistencyError("existence test and fixed-point check disagree for " +
                             kind.label());
    }
    if (!verified) return;
    const Profile profile(efforts);
    for (const EquilibriumRecord& r : found) {
      if (r.profile.max_distance(profile) <= kVerifyTolerance) return;
    }
    found.push_back(make_record(params, kind, profile, marginal));
  };

  const NoCurveExistence nc = exists_no_curve(params);
  admit(EquilibriumKind::no_curve(), nc.exists, nc.marginal,
        std::vector<double>(params.alphas().begin(), params.alphas().end()));

  for (std::size_t k = 0; k <= params.size(); ++k) {
    const KDontCareExistence e = exists_k_dont_care(params, k);
    const Candidate c = k == 0 ? curved_interior_candidate(params)
                               : k_dont_care_candidate(params, k);
    admit(EquilibriumKind::dont_care(k), e.exists, e.marginal, c.efforts);
  }

  std::sort(found.begin(), found.end(),
            [](const EquilibriumRecord& a, const EquilibriumRecord& b) {
              return a.profile.sum() > b.profile.sum();
            });
  for (std::size_t r = 1; r < found.size(); ++r) {
    if (!found[r].profile.dominated_by(found[r - 1].profile, kVerifyTolerance)) {
      throw ConsistencyError("equilibria are not coordinatewise comparable");
    }
  }
  return found;
}

const char* to_string(Order o) {
  switch (o) {
    case Order::Less: return "less";
    case Order::Equal: return "equal";
    case Order::Greater: return "greater";
  }
  return "?";
}

ParetoReport pareto_compare(const GameParams& params,
                            const EquilibriumRecord& a,
                            const EquilibriumRecord& b, double tol) {
  const std::size_t n = params.size();
  if (a.profile.size() != n || b.profile.size() != n) {
    throw std::invalid_argument("records do not match the parameters");
  }
  ParetoReport rep{};
  if (a.profile.max_distance(b.profile) <= tol) {
    rep.effort = Order::Equal;
  } else if (a.profile.dominated_by(b.profile, tol)) {
    rep.effort = Order::Less;
  } else if (b.profile.dominated_by(a.profile, tol)) {
    rep.effort = Order::Greater;
  } else {
    throw ConsistencyError("equilibrium efforts are not comparable");
  }

  rep.utility.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.utility.push_back(compare(a.utilities[i], b.utilities[i], tol));
  }

  if (a.kind.tag == EquilibriumKind::Tag::KDontCare &&
      b.kind.tag == EquilibriumKind::Tag::KDontCare) {
    std::vector<Order> g;
    std::vector<Order> l;
    for (std::size_t i = 0; i < n; ++i) {
      g.push_back(compare(a.allocations[i].grade, b.allocations[i].grade, tol));
      l.push_back(
          compare(a.allocations[i].leisure, b.allocations[i].leisure, tol));
    }
    rep.grade = std::move(g);
    rep.leisure = std::move(l);
  }

  // The lower-effort record must be weakly preferred by every player.
  const Order wanted = rep.effort == Order::Less      ? Order::Greater
                       : rep.effort == Order::Greater ? Order::Less
                                                      : Order::Equal;
  rep.low_effort_pareto_dominates =
      std::all_of(rep.utility.begin(), rep.utility.end(), [&](Order o) {
        return o == wanted || o == Order::Equal;
      });
  return rep;
}

InflationReport asymptotic_report(double alpha_hat, double m,
                                  const std::vector<double>& abilities) {
  if (!(alpha_hat > 0.0 && alpha_hat < 1.0) || !(m > 0.0 && m < 1.0)) {
    throw std::domain_error("alpha_hat and m must lie in (0,1)");
  }
  InflationReport rep{};
  rep.alpha_hat = alpha_hat;
  rep.m = m;
  rep.curved = alpha_hat <= m;
  rep.factor = rep.curved ? m / alpha_hat : 1.0;
  rep.mean_effort = rep.curved ? 1.0 - m * (1.0 / alpha_hat - 1.0) : alpha_hat;
  if (!rep.curved) rep.note = "no curve in the large-class limit";

  bool any_negative = false;
  for (double a : abilities) {
    if (!(a > 0.0 && a < 1.0)) throw std::domain_error("ability outside (0,1)");
    InflationEntry e{};
    e.alpha = a;
    e.effort = a - (1.0 - a) * (rep.factor - 1.0);
    e.leisure = 1.0 - e.effort;
    e.grade = a * rep.factor;
    e.leisure_ratio = e.leisure / (1.0 - a);
    e.grade_ratio = e.grade / a;
    e.inferred_alpha = rep.curved ? alpha_hat * e.grade / m : e.grade;
    any_negative = any_negative || e.effort < 0.0;
    rep.students.push_back(e);
  }
  if (any_negative) {
    rep.note = "some limiting efforts are negative; those students are "
               "no-shows and the interior formulas do not apply to them";
  }
  return rep;
}

double single_student_cutoff(double alpha) {
  return alpha * std::pow(1.0 - alpha, (1.0 - alpha) / alpha);
}

std::vector<double> solve_single_student(double alpha, double m) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(m > 0.0 && m < 1.0)) {
    throw std::domain_error("alpha and m must lie in (0,1)");
  }
  const double cutoff = single_student_cutoff(alpha);
  if (std::abs(m - cutoff) <= 1e-12) return {0.0, alpha};
  if (m < cutoff) return {alpha};
  return {0.0};
}

}  // namespace curvegame
