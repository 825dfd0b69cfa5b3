#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "curvegame/core.hpp"

namespace curvegame::oracle {

// Brute-force references for the analytic solvers. Nothing in here calls the
// reply or equilibrium code; only payoffs from core are evaluated.

/// Grid maximisers of one player's payoff.
struct GridReply {
  /// Grid local maxima whose payoff is within their one-step slack of the
  /// grid maximum, ascending. Two entries signal a near-tie.
  std::vector<double> replies;
  double argmax;       // best grid point
  double max_utility;
};

/// Evaluates U_i on {0, step, ..., 1} against the given opponents' efforts.
/// A local maximum is kept when its payoff plus (1 + 1e-9) times the larger
/// one-step payoff change next to it reaches the grid maximum.
GridReply grid_best_response(const GameParams& params, std::size_t i,
                             std::span<const double> opponents, double step);

/// Same, against an opponents' mean directly.
GridReply grid_best_response_to_mean(const GameParams& params, std::size_t i,
                                     double opposing_mean, double step);

struct GridEquilibrium {
  Profile center;     // centroid of the coarse cluster
  Profile best;       // fine-grid point closest to its grid replies
  std::size_t hits;   // coarse hits in the cluster
};

/// Every grid profile where each player's effort is within one step of a
/// grid reply, grouped into clusters of max-norm radius two steps. Each
/// cluster is re-checked on a grid four times finer around it and dropped if
/// nothing there passes. Restricted to n = 2 or 3; throws std::domain_error
/// otherwise.
std::vector<GridEquilibrium> grid_nash_search(const GameParams& params,
                                              double step);

/// True when the cluster's centroid or its best member lies within `steps`
/// grid steps (max-norm) of `x`.
bool near_profile(const GridEquilibrium& cluster, const Profile& x, double step,
                  double steps = 1.0);

struct FrontierPoint {
  std::vector<double> utilities;
  Profile profile;
};

/// Utility-undominated grid profiles. n = 2 or 3.
std::vector<FrontierPoint> pareto_frontier(const GameParams& params,
                                           double step);

/// Number of grid intervals for a step, rejecting steps outside (0, 0.01]
/// unless allow_coarse is set.
std::size_t grid_intervals(double step, bool allow_coarse = false);

}  // namespace curvegame::oracle
