#include "curvegame/core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

namespace curvegame {

namespace {

void check_index(std::size_t i, std::size_t n) {
  if (i >= n) {
    throw std::out_of_range("player index " + std::to_string(i) +
                            " out of range for class of " + std::to_string(n));
  }
}

void check_same_size(const GameParams& a, const GameParams& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hardness order needs equal class sizes");
  }
}

double cobb_douglas(double g, double leisure, double a) {
  if (leisure <= 0.0) return 0.0;
  return std::pow(g, a) * std::pow(leisure, 1.0 - a);
}

}  // namespace

GameParams GameParams::create(std::vector<double> alpha, double target_mean) {
  if (alpha.empty()) {
    throw ParamError(ParamError::Kind::EmptyClass, 0,
                     "class must contain at least one student");
  }
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0 && alpha[i] < 1.0)) {
      throw ParamError(ParamError::Kind::AbilityOutOfRange, i,
                       "alpha[" + std::to_string(i) + "] must lie in (0,1)");
    }
  }
  if (!(target_mean > 0.0 && target_mean < 1.0)) {
    throw ParamError(ParamError::Kind::TargetOutOfRange, 0,
                     "target mean m must lie in (0,1)");
  }
  return GameParams(std::move(alpha), target_mean);
}

double GameParams::mean_ability() const noexcept {
  return std::accumulate(alpha_.begin(), alpha_.end(), 0.0) /
         static_cast<double>(alpha_.size());
}

GameParams validate_params(std::vector<double> alpha, double target_mean) {
  return GameParams::create(std::move(alpha), target_mean);
}

Profile::Profile(std::vector<double> efforts) : x_(std::move(efforts)) {
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!(x_[i] >= 0.0 && x_[i] <= 1.0)) {
      throw std::invalid_argument("effort[" + std::to_string(i) +
                                  "] must lie in [0,1]");
    }
  }
}

Profile Profile::constant(std::size_t n, double value) {
  return Profile(std::vector<double>(n, value));
}

double Profile::sum() const noexcept {
  return std::accumulate(x_.begin(), x_.end(), 0.0);
}

double Profile::mean() const noexcept {
  return x_.empty() ? 0.0 : sum() / static_cast<double>(x_.size());
}

double Profile::opposing_mean(std::size_t i) const {
  check_index(i, x_.size());
  if (x_.size() < 2) {
    throw std::domain_error("opposing mean needs at least two students");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < x_.size(); ++j) {
    if (j != i) s += x_[j];
  }
  return s / static_cast<double>(x_.size() - 1);
}

bool Profile::dominated_by(const Profile& other, double tol) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (x_[i] > other.x_[i] + tol) return false;
  }
  return true;
}

double Profile::max_distance(const Profile& other) const {
  if (other.size() != size()) {
    throw std::invalid_argument("profiles differ in size");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    d = std::max(d, std::abs(x_[i] - other.x_[i]));
  }
  return d;
}

double grade(const GameParams& params, const Profile& x, std::size_t i) {
  const std::size_t n = params.size();
  check_index(i, n);
  if (x.size() != n) throw std::invalid_argument("profile size mismatch");
  const double g = x[i] + std::max(params.target_mean() - x.mean(), 0.0);
#ifndef NDEBUG
  if (n >= 2) {
    const double nn = static_cast<double>(n);
    const double alt = std::max(
        params.target_mean() + (nn - 1.0) / nn * (x[i] - x.opposing_mean(i)),
        x[i]);
    assert(std::abs(g - alt) <= 1e-12);
  }
#endif
  return g;
}

double grade_vs(const GameParams& params, std::size_t i, double effort,
                double opposing_mean) {
  check_index(i, params.size());
  const double n = static_cast<double>(params.size());
  if (params.size() < 2) {
    throw std::domain_error("grade_vs needs at least two students");
  }
  return std::max(
      params.target_mean() + (n - 1.0) / n * (effort - opposing_mean), effort);
}

Allocation allocation(const GameParams& params, const Profile& x,
                      std::size_t i) {
  return {grade(params, x, i), 1.0 - x[i]};
}

double utility(const GameParams& params, const Profile& x, std::size_t i) {
  const double g = grade(params, x, i);
  return cobb_douglas(g, 1.0 - x[i], params.alpha(i));
}

double utility_vs(const GameParams& params, std::size_t i, double effort,
                  double opposing_mean) {
  const double g = grade_vs(params, i, effort, opposing_mean);
  return cobb_douglas(g, 1.0 - effort, params.alpha(i));
}

double log_utility_gain(const GameParams& params, const Profile& x,
                        std::size_t i, double dx) {
  check_index(i, params.size());
  if (!(dx > 0.0)) throw std::domain_error("effort increment must be positive");
  if (x[i] + dx > 1.0) {
    throw std::domain_error("effort increment leaves the action set");
  }
  std::vector<double> raised(x.efforts().begin(), x.efforts().end());
  raised[i] = std::min(1.0, x[i] + dx);
  const Profile y(std::move(raised));

  const double a = params.alpha(i);
  const double g_new = grade(params, y, i);
  const double g_old = grade(params, x, i);
  const double inf = std::numeric_limits<double>::infinity();
  if (y[i] >= 1.0 || g_new <= 0.0) return -inf;
  if (g_old <= 0.0) return inf;
  // Expanded logs keep the difference accurate when utilities are tiny.
  return a * (std::log(g_new) - std::log(g_old)) +
         (1.0 - a) * (std::log1p(-y[i]) - std::log1p(-x[i]));
}

Hardness harder_than(const GameParams& a, const GameParams& b) {
  check_same_size(a, b);
  bool ge = a.target_mean() <= b.target_mean();
  bool le = a.target_mean() >= b.target_mean();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ge = ge && a.alpha(i) >= b.alpha(i);
    le = le && a.alpha(i) <= b.alpha(i);
  }
  if (ge && le) return Hardness::Equal;
  if (ge) return Hardness::Harder;
  if (le) return Hardness::Easier;
  return Hardness::Incomparable;
}

GameParams hardness_join(const GameParams& a, const GameParams& b) {
  check_same_size(a, b);
  std::vector<double> alpha(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    alpha[i] = std::max(a.alpha(i), b.alpha(i));
  }
  return GameParams::create(std::move(alpha),
                            std::min(a.target_mean(), b.target_mean()));
}

GameParams hardness_meet(const GameParams& a, const GameParams& b) {
  check_same_size(a, b);
  std::vector<double> alpha(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    alpha[i] = std::min(a.alpha(i), b.alpha(i));
  }
  return GameParams::create(std::move(alpha),
                            std::max(a.target_mean(), b.target_mean()));
}

const char* to_string(Hardness h) {
  switch (h) {
    case Hardness::Equal: return "equal";
    case Hardness::Harder: return "harder";
    case Hardness::Easier: return "easier";
    case Hardness::Incomparable: return "incomparable";
  }
  return "?";
}

}  // namespace curvegame
