#include "curvegame/response.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace curvegame {

namespace {

void require_multiplayer(const GameParams& params, std::size_t i) {
  if (params.size() < 2) {
    throw std::domain_error("reply correspondence needs at least two students");
  }
  if (i >= params.size()) throw std::out_of_range("player index out of range");
}

void require_unit(double z) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw std::domain_error("opposing mean must lie in [0,1]");
  }
}

// nm/(n-1)
double curve_scale(const GameParams& params) {
  const double n = static_cast<double>(params.size());
  return n * params.target_mean() / (n - 1.0);
}

}  // namespace

const char* to_string(Region r) {
  switch (r) {
    case Region::CurveBroken: return "curve_broken";
    case Region::MakeOrBreak: return "make_or_break";
    case Region::CurveMade: return "curve_made";
    case Region::NoShowSub: return "no_show";
  }
  return "?";
}

bool BestResponse::contains(double effort, double tol) const {
  return std::any_of(replies.begin(), replies.end(),
                     [&](double r) { return std::abs(r - effort) <= tol; });
}

RegionBounds region_bounds(const GameParams& params, std::size_t i) {
  require_multiplayer(params, i);
  const double n = static_cast<double>(params.size());
  const double a = params.alpha(i);
  const double scale = curve_scale(params);
  return {(n * params.target_mean() - 1.0) / (n - 1.0), scale,
          scale - a / (1.0 - a)};
}

Region classify_opposing_mean(const GameParams& params, std::size_t i,
                              double opposing_mean) {
  require_unit(opposing_mean);
  const RegionBounds b = region_bounds(params, i);
  if (opposing_mean > b.curve_broken_above) return Region::CurveBroken;
  if (opposing_mean <= b.no_show_upto) return Region::NoShowSub;
  if (opposing_mean < b.curve_made_below) return Region::CurveMade;
  return Region::MakeOrBreak;
}

double curve_cutoff(const GameParams& params, std::size_t i,
                    double opposing_mean) {
  require_multiplayer(params, i);
  require_unit(opposing_mean);
  const RegionBounds b = region_bounds(params, i);
  if (opposing_mean < b.curve_made_below ||
      opposing_mean > b.curve_broken_above) {
    throw std::domain_error(
        "curve cutoff only exists inside the make-or-break region");
  }
  const double n = static_cast<double>(params.size());
  return n * params.target_mean() - (n - 1.0) * opposing_mean;
}

double low_critical_point(const GameParams& params, std::size_t i,
                          double opposing_mean) {
  require_multiplayer(params, i);
  const double a = params.alpha(i);
  return a - (1.0 - a) * (curve_scale(params) - opposing_mean);
}

double phi(const GameParams& params, std::size_t i, double z) {
  require_multiplayer(params, i);
  const double n = static_cast<double>(params.size());
  const double a = params.alpha(i);
  const double grade_base = params.target_mean() + (n - 1.0) / n * (1.0 - z);
  const double leisure_base = 1.0 + curve_scale(params) - z;
  if (grade_base <= 0.0 || leisure_base <= 0.0) {
    throw std::domain_error("phi evaluated where a base is non-positive");
  }
  return std::pow(grade_base, a) * std::pow(leisure_base, 1.0 - a) - 1.0;
}

JumpBracket jump_bracket(const GameParams& params, std::size_t i) {
  require_multiplayer(params, i);
  const double n = static_cast<double>(params.size());
  const double a = params.alpha(i);
  return {(n * params.target_mean() - a) / (n - 1.0),
          curve_scale(params) - a / (n - a)};
}

double jump_point(const GameParams& params, std::size_t i) {
  require_multiplayer(params, i);
  const double n = static_cast<double>(params.size());
  const double a = params.alpha(i);
  const double j = 1.0 + curve_scale(params) - std::pow(n / (n - 1.0), a);

  const JumpBracket br = jump_bracket(params, i);
  if (j < br.lo - 1e-12 || j > br.hi + 1e-12) {
    throw ConsistencyError("jump point left its bracketing interval");
  }
  if (std::abs(phi(params, i, j)) > 1e-10) {
    throw ConsistencyError("closed-form jump point is not a root of phi");
  }
  return j;
}

BestResponse best_response(const GameParams& params, std::size_t i,
                           double opposing_mean) {
  require_multiplayer(params, i);
  require_unit(opposing_mean);
  const double a = params.alpha(i);
  const double j = jump_point(params, i);
  const Region region = classify_opposing_mean(params, i, opposing_mean);

  if (std::abs(opposing_mean - j) <= kJumpTolerance) {
    return {{low_critical_point(params, i, opposing_mean), a}, region, j};
  }
  if (opposing_mean > j) return {{a}, region, std::nullopt};
  if (region == Region::NoShowSub) return {{0.0}, region, std::nullopt};
  return {{low_critical_point(params, i, opposing_mean)}, region,
          std::nullopt};
}

double asymptotic_best_response(double alpha, double m, double mean_effort) {
  if (mean_effort >= m) return alpha;
  if (mean_effort <= m - alpha / (1.0 - alpha)) return 0.0;
  return alpha - (1.0 - alpha) * (m - mean_effort);
}

DominatedBounds dominated_bounds(const GameParams& params, std::size_t i) {
  require_multiplayer(params, i);
  const double a = params.alpha(i);
  return {std::max(0.0, a - (1.0 - a) * curve_scale(params)), a};
}

}  // namespace curvegame
