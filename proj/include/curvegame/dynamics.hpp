#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "curvegame/core.hpp"

namespace curvegame {

enum class Extremal { Greatest, Least };
enum class UpdateOrder { Synchronous, RoundRobin };

const char* to_string(Extremal e);

struct DynamicsOptions {
  /// Defaults to the all-ones profile for Greatest, zeros for Least.
  std::optional<Profile> seed;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  UpdateOrder order = UpdateOrder::Synchronous;
};

struct Trajectory {
  std::vector<Profile> steps;  // steps[0] is the seed
  bool converged = false;
  Profile limit{std::vector<double>{}};
  std::size_t iterations = 0;
  /// Max-norm gap between the limit and the matching extremal enumerated
  /// equilibrium; set only for default seeds.
  std::optional<double> equilibrium_gap;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(Trajectory trajectory)
      : std::runtime_error("extremal best-response iteration hit its cap"),
        trajectory_(std::move(trajectory)) {}
  const Trajectory& trajectory() const noexcept { return trajectory_; }

 private:
  Trajectory trajectory_;
};

class OrderViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterates the greatest (or least) selection of every player's reply.
/// Throws NonConvergence when max_iter is reached and OrderViolation if a
/// default-seeded trajectory stops being monotone.
Trajectory iterate_extremal(const GameParams& params, Extremal which,
                            const DynamicsOptions& options = {});

struct RationalizableBounds {
  Profile low;
  Profile high;
};

RationalizableBounds rationalizable_bounds(const GameParams& params,
                                           const DynamicsOptions& options = {});

}  // namespace curvegame
