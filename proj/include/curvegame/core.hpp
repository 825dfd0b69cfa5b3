#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvegame {

/// Raised when raw model parameters fall outside the open parameter set.
class ParamError : public std::invalid_argument {
 public:
  enum class Kind { EmptyClass, AbilityOutOfRange, TargetOutOfRange };

  ParamError(Kind kind, std::size_t index, const std::string& what)
      : std::invalid_argument(what), kind_(kind), index_(index) {}

  Kind kind() const noexcept { return kind_; }
  /// Offending ability index; only meaningful for AbilityOutOfRange.
  std::size_t index() const noexcept { return index_; }

 private:
  Kind kind_;
  std::size_t index_;
};

/// Raised when an internal cross-check between two computation routes fails.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The model theta: one ability per student and the instructor's target mean.
/// Abilities and the target are strictly inside (0, 1).
class GameParams {
 public:
  /// Throws ParamError naming the first offending field.
  static GameParams create(std::vector<double> alpha, double target_mean);

  std::size_t size() const noexcept { return alpha_.size(); }
  double alpha(std::size_t i) const { return alpha_.at(i); }
  std::span<const double> alphas() const noexcept { return alpha_; }
  double target_mean() const noexcept { return m_; }
  double mean_ability() const noexcept;

  bool operator==(const GameParams&) const = default;

 private:
  GameParams(std::vector<double> alpha, double m)
      : alpha_(std::move(alpha)), m_(m) {}

  std::vector<double> alpha_;
  double m_;
};

/// Same as GameParams::create; kept as a free function for call sites that
/// read like a validation step.
GameParams validate_params(std::vector<double> alpha, double target_mean);

/// An effort vector in [0, 1]^n.
class Profile {
 public:
  explicit Profile(std::vector<double> efforts);

  static Profile constant(std::size_t n, double value);

  std::size_t size() const noexcept { return x_.size(); }
  double operator[](std::size_t i) const { return x_[i]; }
  std::span<const double> efforts() const noexcept { return x_; }

  double sum() const noexcept;
  double mean() const noexcept;
  /// Mean effort of everyone but i; requires size() >= 2.
  double opposing_mean(std::size_t i) const;

  /// Coordinatewise order. Returns true iff every entry of *this is <= other.
  bool dominated_by(const Profile& other, double tol = 0.0) const;
  double max_distance(const Profile& other) const;

  bool operator==(const Profile&) const = default;

 private:
  std::vector<double> x_;
};

/// A point in a student's grade-leisure plane. Grades are never truncated
/// at 1; the largest reachable curved grade is 2 - 1/n.
struct Allocation {
  double grade;
  double leisure;
};

/// Curved grade x_i + max(m - xbar, 0).
double grade(const GameParams& params, const Profile& x, std::size_t i);

/// Grade of a student playing `effort` against opponents with mean
/// `opposing_mean` (n >= 2). Payoffs only depend on that mean.
double grade_vs(const GameParams& params, std::size_t i, double effort,
                double opposing_mean);

Allocation allocation(const GameParams& params, const Profile& x,
                      std::size_t i);

/// Cobb-Douglas payoff G^a (1 - x_i)^(1 - a); zero at x_i = 1.
double utility(const GameParams& params, const Profile& x, std::size_t i);

double utility_vs(const GameParams& params, std::size_t i, double effort,
                  double opposing_mean);

/// log U_i(x_i + dx, x_-i) - log U_i(x_i, x_-i).
///
/// Returns -infinity when the raised effort leaves no leisure, and +infinity
/// when only the starting point has zero utility. Throws std::domain_error
/// if dx <= 0 or x_i + dx > 1.
double log_utility_gain(const GameParams& params, const Profile& x,
                        std::size_t i, double dx);

enum class Hardness { Equal, Harder, Easier, Incomparable };

/// theta >= eta iff every ability is at least as large and the target mean is
/// no larger. Throws std::invalid_argument when class sizes differ.
Hardness harder_than(const GameParams& a, const GameParams& b);
GameParams hardness_join(const GameParams& a, const GameParams& b);
GameParams hardness_meet(const GameParams& a, const GameParams& b);

const char* to_string(Hardness h);

}  // namespace curvegame
