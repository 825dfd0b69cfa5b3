#include "curvegame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace curvegame::oracle {

namespace {

constexpr double kSlackFactor = 1.0 + 1e-9;
constexpr std::size_t kRefineFactor = 4;

struct ReplyIndices {
  std::vector<std::size_t> replies;
  std::size_t argmax = 0;
  double max_utility = 0.0;
};

// Scans U_i(k*step) for k = 0..intervals against a fixed opponents' mean.
ReplyIndices scan(const GameParams& params, std::size_t i, double opposing_mean,
                  std::size_t intervals) {
  const double step = 1.0 / static_cast<double>(intervals);
  std::vector<double> u(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double effort = std::min(1.0, static_cast<double>(k) * step);
    u[k] = utility_vs(params, i, effort, opposing_mean);
  }
  ReplyIndices out;
  out.argmax = static_cast<std::size_t>(
      std::max_element(u.begin(), u.end()) - u.begin());
  out.max_utility = u[out.argmax];

  for (std::size_t k = 0; k <= intervals; ++k) {
    const bool left_ok = k == 0 || u[k] >= u[k - 1];
    const bool right_ok = k == intervals || u[k] >= u[k + 1];
    if (!left_ok || !right_ok) continue;
    double slack = 0.0;
    if (k > 0) slack = std::max(slack, std::abs(u[k] - u[k - 1]));
    if (k < intervals) slack = std::max(slack, std::abs(u[k + 1] - u[k]));
    if (u[k] + kSlackFactor * slack < out.max_utility) continue;
    // Flat tops show up as adjacent local maxima; keep the better one.
    if (!out.replies.empty() && k - out.replies.back() <= 1) {
      if (u[k] > u[out.replies.back()]) out.replies.back() = k;
      continue;
    }
    out.replies.push_back(k);
  }
  return out;
}

double effort_at(std::size_t k, std::size_t intervals) {
  return std::min(1.0, static_cast<double>(k) / static_cast<double>(intervals));
}

void require_small_class(const GameParams& params) {
  if (params.size() != 2 && params.size() != 3) {
    throw std::domain_error("grid searches support classes of 2 or 3 only");
  }
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::size_t grid_intervals(double step, bool allow_coarse) {
  if (!(step > 0.0) || (!allow_coarse && step > 0.01) || step > 0.5) {
    throw std::domain_error("grid step out of range");
  }
  const double count = std::round(1.0 / step);
  if (std::abs(count * step - 1.0) > 1e-9) {
    throw std::domain_error("grid step must divide the unit interval");
  }
  return static_cast<std::size_t>(count);
}

GridReply grid_best_response_to_mean(const GameParams& params, std::size_t i,
                                     double opposing_mean, double step) {
  if (params.size() < 2) throw std::domain_error("need at least two students");
  const std::size_t intervals = grid_intervals(step);
  const ReplyIndices r = scan(params, i, opposing_mean, intervals);
  GridReply out{{}, effort_at(r.argmax, intervals), r.max_utility};
  for (std::size_t k : r.replies) out.replies.push_back(effort_at(k, intervals));
  return out;
}

GridReply grid_best_response(const GameParams& params, std::size_t i,
                             std::span<const double> opponents, double step) {
  if (params.size() < 2 || opponents.size() != params.size() - 1) {
    throw std::invalid_argument("opponents must list the other n-1 efforts");
  }
  const double mean = std::accumulate(opponents.begin(), opponents.end(), 0.0) /
                      static_cast<double>(opponents.size());
  return grid_best_response_to_mean(params, i, mean, step);
}

namespace {

// near[i][s][k]: distance in grid steps from effort k to the nearest grid
// reply of player i when the opponents' grid indices add up to s; 2 means
// "two or more". Player i's sums are tabulated on [sum_lo[i], sum_hi[i]].
struct NearTable {
  std::size_t n;
  std::size_t points;
  std::vector<std::size_t> sum_lo;
  std::vector<std::vector<std::vector<std::uint8_t>>> rows;

  std::uint8_t at(std::size_t i, std::size_t s, std::size_t k) const {
    return rows[i][s - sum_lo[i]][k];
  }
};

NearTable build_near(const GameParams& params, std::size_t intervals,
                     const std::vector<std::size_t>& sum_lo,
                     const std::vector<std::size_t>& sum_hi) {
  const std::size_t n = params.size();
  NearTable t{n, intervals + 1, sum_lo, std::vector<std::vector<std::vector<std::uint8_t>>>(n)};
  const double denom = static_cast<double>(n - 1) * static_cast<double>(intervals);
  for (std::size_t i = 0; i < n; ++i) {
    t.rows[i].resize(sum_hi[i] - sum_lo[i] + 1);
    for (std::size_t s = sum_lo[i]; s <= sum_hi[i]; ++s) {
      const double mean = std::min(1.0, static_cast<double>(s) / denom);
      const ReplyIndices r = scan(params, i, mean, intervals);
      std::vector<std::uint8_t>& row = t.rows[i][s - sum_lo[i]];
      row.assign(t.points, 2);
      for (std::size_t k : r.replies) {
        row[k] = 0;
        if (k > 0) row[k - 1] = std::min<std::uint8_t>(row[k - 1], 1);
        if (k + 1 < t.points) row[k + 1] = std::min<std::uint8_t>(row[k + 1], 1);
      }
    }
  }
  return t;
}

struct Hit {
  std::vector<std::size_t> idx;
  unsigned residual;
};

// Every profile in the box lo..hi (inclusive, per coordinate) that passes the
// one-step test.
std::vector<Hit> scan_box(const NearTable& t, const std::vector<std::size_t>& lo,
                          const std::vector<std::size_t>& hi) {
  const std::size_t n = t.n;
  std::vector<Hit> hits;
  std::vector<std::size_t> idx = lo;
  while (true) {
    std::size_t total = 0;
    for (std::size_t k : idx) total += k;
    unsigned res = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const std::uint8_t d = t.at(i, total - idx[i], idx[i]);
      ok = d <= 1;
      res += d;
    }
    if (ok) hits.push_back({idx, res});
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] > hi[pos]) idx[pos] = lo[pos], ++pos;
    if (pos == n) break;
  }
  return hits;
}

// Re-runs the one-step test on a grid `factor` times finer, inside the
// cluster's bounding box padded by two coarse steps. Returns the best fine
// hit, or nothing when the cluster does not survive refinement.
std::optional<std::vector<double>> refine(const GameParams& params,
                                          std::size_t intervals,
                                          const std::vector<Hit>& members,
                                          std::size_t factor) {
  const std::size_t n = params.size();
  const std::size_t fine = intervals * factor;
  std::vector<std::size_t> lo(n), hi(n);
  for (std::size_t d = 0; d < n; ++d) {
    std::size_t a = intervals, b = 0;
    for (const Hit& h : members) {
      a = std::min(a, h.idx[d]);
      b = std::max(b, h.idx[d]);
    }
    lo[d] = (a >= 2 ? a - 2 : 0) * factor;
    hi[d] = std::min(intervals, b + 2) * factor;
  }
  std::vector<std::size_t> sum_lo(n, 0), sum_hi(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sum_lo[i] += lo[j];
      sum_hi[i] += hi[j];
    }
  }
  const NearTable t = build_near(params, fine, sum_lo, sum_hi);
  const std::vector<Hit> hits = scan_box(t, lo, hi);
  if (hits.empty()) return std::nullopt;
  const Hit* best = &hits.front();
  for (const Hit& h : hits) {
    if (h.residual < best->residual) best = &h;
  }
  std::vector<double> x(n);
  for (std::size_t d = 0; d < n; ++d) x[d] = effort_at(best->idx[d], fine);
  return x;
}

}  // namespace

std::vector<GridEquilibrium> grid_nash_search(const GameParams& params,
                                              double step) {
  require_small_class(params);
  const std::size_t n = params.size();
  const double min_step = n == 2 ? 1e-3 : 5e-3;
  if (step < min_step * (1.0 - 1e-9)) {
    throw std::domain_error("grid step below the supported resolution");
  }
  const std::size_t intervals = grid_intervals(step, true);
  const std::size_t points = intervals + 1;

  const NearTable table =
      build_near(params, intervals, std::vector<std::size_t>(n, 0),
                 std::vector<std::size_t>(n, (n - 1) * intervals));
  const std::vector<Hit> hits =
      scan_box(table, std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, intervals));

  auto key = [&](const std::vector<std::size_t>& v) {
    std::uint64_t h = 0;
    for (std::size_t k : v) h = h * points + k;
    return h;
  };
  std::unordered_map<std::uint64_t, std::size_t> lookup;
  for (std::size_t h = 0; h < hits.size(); ++h) lookup.emplace(key(hits[h].idx), h);

  UnionFind uf(hits.size());
  for (std::size_t h = 0; h < hits.size(); ++h) {
    std::vector<long> off(n, -2);
    while (true) {
      std::vector<std::size_t> nb(n);
      bool inside = true;
      for (std::size_t d = 0; d < n; ++d) {
        const long v = static_cast<long>(hits[h].idx[d]) + off[d];
        inside = inside && v >= 0 && v < static_cast<long>(points);
        nb[d] = static_cast<std::size_t>(std::max(0L, v));
      }
      if (inside) {
        const auto it = lookup.find(key(nb));
        if (it != lookup.end()) uf.unite(h, it->second);
      }
      std::size_t d = 0;
      while (d < n && ++off[d] > 2) off[d++] = -2;
      if (d == n) break;
    }
  }

  std::map<std::size_t, std::vector<Hit>> groups;
  for (std::size_t h = 0; h < hits.size(); ++h) groups[uf.find(h)].push_back(hits[h]);

  std::vector<GridEquilibrium> out;
  for (auto& [root, members] : groups) {
    // Clusters produced by near-ties a step away from a reply jump vanish on
    // the finer grid.
    const std::optional<std::vector<double>> best =
        refine(params, intervals, members, kRefineFactor);
    if (!best) continue;
    std::vector<double> center(n, 0.0);
    for (const Hit& h : members) {
      for (std::size_t d = 0; d < n; ++d) center[d] += effort_at(h.idx[d], intervals);
    }
    for (double& c : center) c /= static_cast<double>(members.size());
    out.push_back({Profile(center), Profile(*best), members.size()});
  }
  std::stable_sort(out.begin(), out.end(), [](const GridEquilibrium& a, const GridEquilibrium& b) {
    return a.center.sum() > b.center.sum();
  });
  return out;
}

bool near_profile(const GridEquilibrium& cluster, const Profile& x, double step,
                  double steps) {
  const double reach = steps * step * (1.0 + 1e-9);
  return cluster.center.max_distance(x) <= reach ||
         cluster.best.max_distance(x) <= reach;
}

std::vector<FrontierPoint> pareto_frontier(const GameParams& params,
                                           double step) {
  require_small_class(params);
  const std::size_t n = params.size();
  const std::size_t intervals = grid_intervals(step, true);
  const std::size_t points = intervals + 1;

  struct Entry {
    std::vector<double> u;
    std::vector<double> x;
    double total;
  };
  std::vector<Entry> all;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::vector<double> x(n);
    for (std::size_t d = 0; d < n; ++d) x[d] = effort_at(idx[d], intervals);
    const Profile p(x);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = utility(params, p, i);
    const double total = std::accumulate(u.begin(), u.end(), 0.0);
    all.push_back({std::move(u), std::move(x), total});
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == points) idx[pos++] = 0;
    if (pos == n) break;
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Entry& a, const Entry& b) { return a.total > b.total; });

  auto dominates = [](const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return false;
      strict = strict || a[i] > b[i];
    }
    return strict;
  };

  // A dominating point has a strictly larger utility sum, so scanning in
  // decreasing-sum order only needs the frontier found so far.
  std::vector<const Entry*> frontier;
  for (const Entry& e : all) {
    const bool dominated = std::any_of(frontier.begin(), frontier.end(),
                                       [&](const Entry* f) { return dominates(f->u, e.u); });
    if (!dominated) frontier.push_back(&e);
  }

  std::vector<FrontierPoint> out;
  out.reserve(frontier.size());
  for (const Entry* f : frontier) out.push_back({f->u, Profile(f->x)});
  return out;
}

}  // namespace curvegame::oracle
