#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "curvegame/core.hpp"

namespace curvegame {

/// Where the opponents' mean effort puts player i.
///
/// Tags are assigned with precedence CurveBroken, NoShowSub, CurveMade,
/// MakeOrBreak, so NoShowSub wins wherever the zero reply applies (including
/// the rare instances where that interval reaches into the make-or-break
/// strip) and MakeOrBreak always carries a positive reply.
enum class Region { CurveBroken, MakeOrBreak, CurveMade, NoShowSub };

const char* to_string(Region r);

/// |xbar_-i - J_i| at or below this is treated as the indifference point.
inline constexpr double kJumpTolerance = 1e-9;

/// Set-valued reply: one effort, or two at the jump (low first).
struct BestResponse {
  std::vector<double> replies;
  Region region;
  std::optional<double> jump;

  double least() const { return replies.front(); }
  double greatest() const { return replies.back(); }
  bool contains(double effort, double tol) const;
};

/// Interval endpoints of player i's regions, unclamped.
struct RegionBounds {
  double curve_made_below;   // (nm - 1)/(n - 1)
  double curve_broken_above; // nm/(n - 1)
  double no_show_upto;       // nm/(n - 1) - a/(1 - a)
};

RegionBounds region_bounds(const GameParams& params, std::size_t i);

Region classify_opposing_mean(const GameParams& params, std::size_t i,
                              double opposing_mean);

/// Effort x_hat = nm - (n-1) xbar_-i at which the class mean hits m.
/// Throws std::domain_error outside the make-or-break strip.
double curve_cutoff(const GameParams& params, std::size_t i,
                    double opposing_mean);

/// Interior stationary point of the curved payoff,
/// a - (1 - a)(nm/(n-1) - xbar_-i). Not clamped.
double low_critical_point(const GameParams& params, std::size_t i,
                          double opposing_mean);

/// Ratio U_i(x_L)/U_i(a_i) - 1 as a function of the opponents' mean z.
/// Throws std::domain_error if either base is non-positive.
double phi(const GameParams& params, std::size_t i, double z);

/// Bracket [(nm - a)/(n-1), nm/(n-1) - a/(n - a)] holding the unique root of
/// phi.
struct JumpBracket {
  double lo;
  double hi;
};

JumpBracket jump_bracket(const GameParams& params, std::size_t i);

/// J_i in closed form, 1 + nm/(n-1) - (n/(n-1))^a. The two bases of phi
/// differ by the constant factor (n-1)/n, which makes phi affine in z after
/// pulling out ((n-1)/n)^a. Verified against phi and the bracket; a failed
/// check throws ConsistencyError.
double jump_point(const GameParams& params, std::size_t i);

BestResponse best_response(const GameParams& params, std::size_t i,
                           double opposing_mean);

/// Limit of the reply function as the class grows without bound.
double asymptotic_best_response(double alpha, double m, double mean_effort);

struct DominatedBounds {
  double low;
  double high;
};

/// Undominated efforts lie in [max(0, a - (1-a) nm/(n-1)), a].
DominatedBounds dominated_bounds(const GameParams& params, std::size_t i);

}  // namespace curvegame
