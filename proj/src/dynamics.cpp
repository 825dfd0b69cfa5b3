#include "curvegame/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "curvegame/equilibrium.hpp"
#include "curvegame/response.hpp"

namespace curvegame {

namespace {

// Slack for monotonicity checks; replies are recomputed from sums that move
// by rounding error once the iteration has settled.
constexpr double kOrderSlack = 1e-12;

double select(const BestResponse& br, Extremal which) {
  return which == Extremal::Greatest ? br.greatest() : br.least();
}

std::vector<double> step_synchronous(const GameParams& params,
                                     const std::vector<double>& x,
                                     Extremal which) {
  const std::size_t n = x.size();
  double total = 0.0;
  for (double v : x) total += v;
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = std::clamp((total - x[i]) / static_cast<double>(n - 1), 0.0, 1.0);
    next[i] = select(best_response(params, i, z), which);
  }
  return next;
}

std::vector<double> step_round_robin(const GameParams& params,
                                     std::vector<double> x, Extremal which) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    double others = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others += x[j];
    }
    const double z = std::clamp(others / static_cast<double>(n - 1), 0.0, 1.0);
    x[i] = select(best_response(params, i, z), which);
  }
  return x;
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool monotone_step(const std::vector<double>& prev,
                   const std::vector<double>& next, Extremal which) {
  for (std::size_t i = 0; i < prev.size(); ++i) {
    if (which == Extremal::Greatest && next[i] > prev[i] + kOrderSlack) return false;
    if (which == Extremal::Least && next[i] < prev[i] - kOrderSlack) return false;
  }
  return true;
}

}  // namespace

const char* to_string(Extremal e) {
  return e == Extremal::Greatest ? "greatest" : "least";
}

Trajectory iterate_extremal(const GameParams& params, Extremal which,
                            const DynamicsOptions& options) {
  const std::size_t n = params.size();
  if (n < 2) throw std::domain_error("dynamics need at least two students");
  if (options.seed && options.seed->size() != n) {
    throw std::invalid_argument("seed size does not match class size");
  }
  const bool default_seed = !options.seed.has_value();
  std::vector<double> x =
      default_seed
          ? std::vector<double>(n, which == Extremal::Greatest ? 1.0 : 0.0)
          : std::vector<double>(options.seed->efforts().begin(),
                                options.seed->efforts().end());

  Trajectory traj;
  traj.steps.emplace_back(x);
  while (traj.iterations < options.max_iter) {
    std::vector<double> next = options.order == UpdateOrder::Synchronous
                                   ? step_synchronous(params, x, which)
                                   : step_round_robin(params, x, which);
    ++traj.iterations;
    if (default_seed && !monotone_step(x, next, which)) {
      throw OrderViolation("extremal iteration from the default seed is not monotone");
    }
    const double gap = max_gap(x, next);
    traj.steps.emplace_back(next);
    x = std::move(next);
    if (gap <= options.tol) {
      traj.converged = true;
      break;
    }
  }
  traj.limit = Profile(x);
  if (!traj.converged) throw NonConvergence(std::move(traj));

  if (default_seed) {
    const std::vector<EquilibriumRecord> eq = enumerate_equilibria(params);
    const Profile& target =
        which == Extremal::Greatest ? eq.front().profile : eq.back().profile;
    traj.equilibrium_gap = traj.limit.max_distance(target);
  }
  return traj;
}

RationalizableBounds rationalizable_bounds(const GameParams& params,
                                           const DynamicsOptions& options) {
  DynamicsOptions opts = options;
  opts.seed.reset();
  Trajectory low = iterate_extremal(params, Extremal::Least, opts);
  Trajectory high = iterate_extremal(params, Extremal::Greatest, opts);
  return {std::move(low.limit), std::move(high.limit)};
}

}  // namespace curvegame
