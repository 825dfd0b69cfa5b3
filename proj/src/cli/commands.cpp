#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "curvegame/cli.hpp"
#include "curvegame/dynamics.hpp"
#include "curvegame/equilibrium.hpp"
#include "curvegame/oracle.hpp"
#include "curvegame/response.hpp"

namespace curvegame::cli {

namespace {

using Json = nlohmann::ordered_json;

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_sig12(v);
}

template <class Range>
Json nums(const Range& r) {
  Json a = Json::array();
  for (double v : r) a.push_back(num(v));
  return a;
}

Json params_json(const Instance& inst) {
  Json j;
  if (!inst.label.empty()) j["label"] = inst.label;
  j["m"] = num(inst.params.target_mean());
  j["alpha"] = nums(inst.params.alphas());
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Runs a command body that renders into `buf`; stdout only sees the buffer
// when the body finishes, so failures never leave partial reports.
int guarded(std::ostream& out, std::ostream& err,
            const std::function<int(std::ostringstream&)>& body) {
  std::ostringstream buf;
  int code = kOk;
  try {
    code = body(buf);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const ParamError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const ConsistencyError& e) {
    err << "internal consistency check failed: " << e.what() << '\n';
    return kVerifyMismatch;
  } catch (const OrderViolation& e) {
    err << "internal consistency check failed: " << e.what() << '\n';
    return kVerifyMismatch;
  } catch (const std::domain_error& e) {
    err << "unsupported input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  }
  out << buf.str();
  return code;
}

Json record_json(const EquilibriumRecord& r) {
  Json j;
  j["kind"] = r.kind.label();
  j["profile"] = nums(r.profile.efforts());
  j["mean"] = num(r.mean);
  Json grades = Json::array();
  for (const Allocation& a : r.allocations) grades.push_back(num(a.grade));
  j["grades"] = grades;
  j["utilities"] = nums(r.utilities);
  if (r.marginal) j["marginal"] = true;
  return j;
}

Json single_student_json(const Instance& inst) {
  const double a = inst.params.alpha(0);
  const double m = inst.params.target_mean();
  const std::vector<double> replies = solve_single_student(a, m);
  Json eq = Json::array();
  for (auto it = replies.rbegin(); it != replies.rend(); ++it) {
    const Profile p({*it});
    Json j;
    j["kind"] = *it > 0.0 ? EquilibriumKind::no_curve().label()
                          : EquilibriumKind::dont_care(1).label();
    j["profile"] = nums(p.efforts());
    j["mean"] = num(*it);
    j["grades"] = Json::array({num(grade(inst.params, p, 0))});
    j["utilities"] = Json::array({num(utility(inst.params, p, 0))});
    eq.push_back(j);
  }
  Json j;
  j["params"] = params_json(inst);
  j["replies"] = nums(replies);
  j["cutoff"] = num(single_student_cutoff(a));
  j["equilibria"] = eq;
  return j;
}

std::size_t require_class(const Instance& inst, std::size_t min_n,
                          const char* what) {
  if (inst.params.size() < min_n) {
    throw UsageError(std::string(what) + " needs at least " +
                     std::to_string(min_n) + " students");
  }
  return inst.params.size();
}

void br_row(std::ostream& out, const GameParams& p, std::size_t i, double z) {
  const BestResponse br = best_response(p, i, z);
  out << format_number(z) << ',' << to_string(br.region) << ','
      << format_number(br.least()) << ',' << format_number(br.greatest()) << ','
      << (br.replies.size() > 1 ? 1 : 0) << '\n';
}

void write_trace(const std::string& path, const Trajectory& t, std::size_t n) {
  std::ostringstream csv;
  csv << "step";
  for (std::size_t i = 0; i < n; ++i) csv << ",x" << i;
  csv << '\n';
  for (std::size_t s = 0; s < t.steps.size(); ++s) {
    csv << s;
    for (double v : t.steps[s].efforts()) csv << ',' << format_number(v);
    csv << '\n';
  }
  write_atomically(path, csv.str());
}

// Analytic replies and grid replies agree when both extremal analytic
// replies sit within one step of some grid reply and the grid argmax sits
// within one step of some analytic reply. Extra grid replies are near-ties.
bool replies_agree(const BestResponse& br, const oracle::GridReply& g,
                   double step) {
  const double reach = step * (1.0 + 1e-9);
  auto near_any = [reach](double v, const std::vector<double>& set) {
    return std::any_of(set.begin(), set.end(),
                       [&](double w) { return std::abs(v - w) <= reach; });
  };
  return near_any(br.least(), g.replies) && near_any(br.greatest(), g.replies) &&
         near_any(g.argmax, br.replies);
}

Json verify_replies(const GameParams& p, double step, std::size_t samples,
                    std::size_t& mismatches) {
  Json failures = Json::array();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t s = 0; s < samples; ++s) {
      const double z = (static_cast<double>(s) + 0.5) / static_cast<double>(samples);
      const BestResponse br = best_response(p, i, z);
      const oracle::GridReply g = oracle::grid_best_response_to_mean(p, i, z, step);
      ++checked;
      if (replies_agree(br, g, step)) continue;
      ++mismatches;
      if (failures.size() < 20) {
        Json f;
        f["player"] = i;
        f["xbar_minus_i"] = num(z);
        f["analytic"] = nums(br.replies);
        f["grid"] = nums(g.replies);
        failures.push_back(f);
      }
    }
  }
  Json j;
  j["step"] = num(step);
  j["checked"] = checked;
  j["mismatches"] = mismatches;
  j["failures"] = failures;
  return j;
}

Json verify_nash(const GameParams& p, double step, bool& ok) {
  const std::vector<EquilibriumRecord> eq = enumerate_equilibria(p);
  const std::vector<oracle::GridEquilibrium> grid = oracle::grid_nash_search(p, step);
  ok = eq.size() == grid.size();
  for (std::size_t k = 0; ok && k < eq.size(); ++k) {
    ok = oracle::near_profile(grid[k], eq[k].profile, step);
  }
  Json analytic = Json::array();
  for (const EquilibriumRecord& r : eq) {
    Json a;
    a["kind"] = r.kind.label();
    a["profile"] = nums(r.profile.efforts());
    analytic.push_back(a);
  }
  Json clusters = Json::array();
  for (const oracle::GridEquilibrium& g : grid) {
    Json c;
    c["center"] = nums(g.center.efforts());
    c["best"] = nums(g.best.efforts());
    c["hits"] = g.hits;
    clusters.push_back(c);
  }
  Json j;
  j["step"] = num(step);
  j["analytic"] = analytic;
  j["grid"] = clusters;
  j["match"] = ok;
  return j;
}

Json inflation_json(const InflationReport& r) {
  Json j;
  j["alpha_hat"] = num(r.alpha_hat);
  j["m"] = num(r.m);
  j["curved"] = r.curved;
  j["factor"] = num(r.factor);
  j["mean_effort"] = num(r.mean_effort);
  Json students = Json::array();
  for (const InflationEntry& e : r.students) {
    Json s;
    s["alpha"] = num(e.alpha);
    s["effort"] = num(e.effort);
    s["leisure"] = num(e.leisure);
    s["grade"] = num(e.grade);
    s["leisure_ratio"] = num(e.leisure_ratio);
    s["grade_ratio"] = num(e.grade_ratio);
    s["inferred_alpha"] = num(e.inferred_alpha);
    students.push_back(s);
  }
  j["students"] = students;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&](std::ostringstream& buf) {
    const Instance inst = load_instance(opt.instance);
    if (inst.params.size() == 1) {
      buf << dump(single_student_json(inst));
      return int{kOk};
    }
    Json eq = Json::array();
    for (const EquilibriumRecord& r : enumerate_equilibria(inst.params)) {
      eq.push_back(record_json(r));
    }
    Json j;
    j["params"] = params_json(inst);
    j["equilibria"] = eq;
    buf << dump(j);
    return int{kOk};
  });
}

int cmd_br(const BrOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&](std::ostringstream& buf) {
    const Instance inst = load_instance(opt.instance);
    const std::size_t n = require_class(inst, 2, "br");
    if (opt.player >= n) throw UsageError("player index out of range");
    if (opt.mean.has_value() == opt.grid.has_value()) {
      throw UsageError("give exactly one of --mean and --grid");
    }
    const GameParams& p = inst.params;
    const std::size_t i = opt.player;
    const double jump = jump_point(p, i);

    buf << "# player=" << i << ",alpha=" << format_number(p.alpha(i))
        << ",m=" << format_number(p.target_mean()) << ",jump="
        << format_number(jump) << '\n';
    buf << "xbar_minus_i,region,reply_low,reply_high,jump\n";

    if (opt.mean) {
      const double z = *opt.mean;
      if (!(z >= 0.0 && z <= 1.0)) throw UsageError("--mean must lie in [0, 1]");
      br_row(buf, p, i, z);
      return int{kOk};
    }
    const double step = *opt.grid;
    if (!(step > 0.0 && step <= 1.0)) throw UsageError("--grid step must lie in (0, 1]");
    std::vector<double> zs;
    for (std::size_t k = 0;; ++k) {
      const double z = round_sig12(static_cast<double>(k) * step);
      if (z >= 1.0 - 1e-12) break;
      zs.push_back(z);
    }
    zs.push_back(1.0);
    // The jump gets its own row so the two-point reply is visible at any step.
    if (jump >= 0.0 && jump <= 1.0) {
      const auto at = std::lower_bound(zs.begin(), zs.end(), jump);
      if (at != zs.end() && std::abs(*at - jump) <= kJumpTolerance) {
        *at = jump;
      } else {
        zs.insert(at, jump);
      }
    }
    for (double z : zs) br_row(buf, p, i, z);
    return int{kOk};
  });
}

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&](std::ostringstream& buf) {
    const SweepSpec spec = load_sweep_spec(opt.spec);
    const std::vector<SweepRow> rows = run_sweep(spec, sweep_threads());
    std::ostringstream csv;
    write_sweep_csv(csv, spec, rows);
    if (opt.out) {
      write_atomically(*opt.out, csv.str());
    } else {
      buf << csv.str();
    }
    return int{kOk};
  });
}

int cmd_dynamics(const DynamicsCliOptions& opt, std::ostream& out,
                 std::ostream& err) {
  return guarded(out, err, [&](std::ostringstream& buf) {
    const Instance inst = load_instance(opt.instance);
    const std::size_t n = require_class(inst, 2, "dynamics");
    Extremal which;
    if (opt.which == "greatest") {
      which = Extremal::Greatest;
    } else if (opt.which == "least") {
      which = Extremal::Least;
    } else {
      throw UsageError("--which must be greatest or least");
    }
    if (opt.max_iter == 0) throw UsageError("--max-iter must be positive");
    DynamicsOptions dopt;
    dopt.max_iter = opt.max_iter;
    dopt.tol = opt.tol;

    Json j;
    j["params"] = params_json(inst);
    j["which"] = to_string(which);
    try {
      const Trajectory t = iterate_extremal(inst.params, which, dopt);
      if (opt.trace) write_trace(*opt.trace, t, n);
      j["limit"] = nums(t.limit.efforts());
      j["iterations"] = t.iterations;
      j["converged"] = true;
      if (t.equilibrium_gap) j["equilibrium_gap"] = num(*t.equilibrium_gap);
      buf << dump(j);
      return int{kOk};
    } catch (const NonConvergence& e) {
      const Trajectory& t = e.trajectory();
      if (opt.trace) write_trace(*opt.trace, t, n);
      const std::size_t s = t.steps.size();
      j["limit"] = nums(t.limit.efforts());
      j["iterations"] = t.iterations;
      j["converged"] = false;
      j["last_change"] = num(s >= 2 ? t.steps[s - 1].max_distance(t.steps[s - 2]) : 0.0);
      j["max_iter"] = opt.max_iter;
      buf << dump(j);
      err << "error: " << e.what() << '\n';
      return int{kNonConvergence};
    }
  });
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&](std::ostringstream& buf) {
    const Instance inst = load_instance(opt.instance);
    Json j;
    j["params"] = params_json(inst);

    if (opt.inflation) {
      const double a = *opt.inflation;
      if (!(a > 0.0 && a < 1.0)) throw UsageError("--inflation must lie in (0, 1)");
      const std::vector<double> abilities(inst.params.alphas().begin(),
                                          inst.params.alphas().end());
      j["inflation"] = inflation_json(
          asymptotic_report(a, inst.params.target_mean(), abilities));
      j["ok"] = true;
      buf << dump(j);
      return int{kOk};
    }

    const std::size_t n = require_class(inst, 2, "verify");
    if (!opt.br_only && n > 3) {
      throw UsageError("grid Nash search supports 2 or 3 students; use --br-only");
    }
    oracle::grid_intervals(opt.step);  // validates the step up front

    std::size_t br_mismatches = 0;
    j["best_response"] = verify_replies(inst.params, opt.step, opt.br_samples, br_mismatches);
    bool nash_ok = true;
    if (!opt.br_only) {
      // The three-player search is cubic in the grid size; 5e-3 is its floor.
      const double nash_step = n == 3 ? std::max(opt.step, 5e-3) : opt.step;
      j["nash"] = verify_nash(inst.params, nash_step, nash_ok);
    }
    const bool ok = br_mismatches == 0 && nash_ok;
    j["ok"] = ok;
    buf << dump(j);
    if (!ok) err << "error: oracle and analytic results disagree\n";
    return ok ? int{kOk} : int{kVerifyMismatch};
  });
}

}  // namespace curvegame::cli
