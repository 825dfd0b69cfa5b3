#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <mutex>
#include <optional>
#include <thread>

#include <unistd.h>

#include "json.hpp"

#include "curvegame/cli.hpp"
#include "curvegame/equilibrium.hpp"

namespace curvegame::cli {

namespace {

using nlohmann::json;

// Parses text, rejecting duplicate keys in any object.
json parse_strict(std::string_view text) {
  std::vector<std::set<std::string>> seen;
  json::parser_callback_t cb = [&seen](int, json::parse_event_t ev, json& j) {
    switch (ev) {
      case json::parse_event_t::object_start:
        seen.emplace_back();
        break;
      case json::parse_event_t::object_end:
        seen.pop_back();
        break;
      case json::parse_event_t::key:
        if (!seen.back().insert(j.get<std::string>()).second) {
          throw InputError("duplicate key \"" + j.get<std::string>() + "\"");
        }
        break;
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(text.begin(), text.end(), cb);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double number_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string("missing \"") + key + "\"");
  if (!it->is_number()) throw InputError(std::string("\"") + key + "\" must be a number");
  return it->get<double>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const char* what) {
  for (const auto& [key, _] : obj.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                [&](const char* a) { return key == a; });
    if (!ok) throw InputError(std::string("unknown key \"") + key + "\" in " + what);
  }
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw InputError("instance must be a JSON object");
  reject_unknown(j, {"m", "alpha", "label"}, "instance");
  const double m = number_field(j, "m");
  const auto a = j.find("alpha");
  if (a == j.end()) throw InputError("missing \"alpha\"");
  if (!a->is_array()) throw InputError("\"alpha\" must be an array");
  std::vector<double> alpha;
  for (const json& v : *a) {
    if (!v.is_number()) throw InputError("\"alpha\" entries must be numbers");
    alpha.push_back(v.get<double>());
  }
  std::string label;
  if (const auto l = j.find("label"); l != j.end()) {
    if (!l->is_string()) throw InputError("\"label\" must be a string");
    label = l->get<std::string>();
  }
  return {GameParams::create(std::move(alpha), m), std::move(label)};
}

SweepAxis axis_from_json(const json& j) {
  if (!j.is_object()) throw InputError("sweep axis must be an object");
  reject_unknown(j, {"kind", "index", "lo", "hi", "step"}, "sweep axis");
  const auto k = j.find("kind");
  if (k == j.end() || !k->is_string()) throw InputError("axis needs a string \"kind\"");
  SweepAxis axis{};
  const std::string kind = k->get<std::string>();
  if (kind == "alpha") {
    axis.kind = SweepAxis::Kind::Alpha;
  } else if (kind == "m") {
    axis.kind = SweepAxis::Kind::Mean;
  } else {
    throw UsageError("axis kind must be \"alpha\" or \"m\"");
  }
  if (const auto i = j.find("index"); i != j.end()) {
    if (!i->is_number_integer() || i->get<long long>() < 0) {
      throw InputError("axis \"index\" must be a non-negative integer");
    }
    axis.index = i->get<std::size_t>();
  }
  axis.lo = number_field(j, "lo");
  axis.hi = number_field(j, "hi");
  axis.step = number_field(j, "step");
  return axis;
}

void check_axis(const SweepAxis& axis, std::size_t n) {
  const bool inside = axis.lo > 0.0 && axis.lo < 1.0 && axis.hi > 0.0 && axis.hi < 1.0;
  if (!inside || axis.lo > axis.hi) throw UsageError("axis range must satisfy 0 < lo <= hi < 1");
  if (!(axis.step > 0.0) || !std::isfinite(axis.step)) throw UsageError("axis step must be positive");
  if (axis.kind == SweepAxis::Kind::Alpha && axis.index >= n) {
    throw UsageError("alpha axis index out of range");
  }
}

GameParams cell_params(const SweepSpec& spec, double first, double second) {
  std::vector<double> alpha(spec.fixed.params.alphas().begin(),
                            spec.fixed.params.alphas().end());
  double m = spec.fixed.params.target_mean();
  const double vals[2] = {first, second};
  for (int a = 0; a < 2; ++a) {
    if (spec.axes[a].kind == SweepAxis::Kind::Mean) {
      m = vals[a];
    } else {
      alpha[spec.axes[a].index] = vals[a];
    }
  }
  return GameParams::create(std::move(alpha), m);
}

SweepRow evaluate_cell(const SweepSpec& spec, double first, double second) {
  const GameParams p = cell_params(spec, first, second);
  SweepRow row{first, second, exists_no_curve(p).exists, {}, 0};
  row.equilibria = row.no_curve ? 1 : 0;
  for (std::size_t k = 0; k <= p.size(); ++k) {
    const bool e = exists_k_dont_care(p, k).exists;
    row.dont_care.push_back(e);
    row.equilibria += e ? 1 : 0;
  }
  return row;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  return instance_from_json(parse_strict(text));
}

Instance load_instance(const std::string& path) {
  return parse_instance(slurp(path));
}

std::vector<double> SweepAxis::values() const {
  const double span = (hi - lo) / step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out(count);
  // Round through 12 digits so 0.4 + 17 * 0.01 prints and compares as 0.57.
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = std::min(hi, round_sig12(lo + static_cast<double>(k) * step));
  }
  return out;
}

std::string SweepAxis::name() const {
  return kind == Kind::Mean ? std::string("m") : "alpha_" + std::to_string(index);
}

SweepSpec parse_sweep_spec(std::string_view text) {
  const json j = parse_strict(text);
  if (!j.is_object()) throw InputError("sweep spec must be a JSON object");
  reject_unknown(j, {"axes", "fixed"}, "sweep spec");
  const auto axes = j.find("axes");
  if (axes == j.end() || !axes->is_array()) throw InputError("missing \"axes\" array");
  if (axes->size() != 2) throw UsageError("a sweep takes exactly two axes");
  const auto fixed = j.find("fixed");
  if (fixed == j.end()) throw InputError("missing \"fixed\" instance");

  SweepSpec spec{{axis_from_json((*axes)[0]), axis_from_json((*axes)[1])},
                 instance_from_json(*fixed)};
  for (const SweepAxis& a : spec.axes) check_axis(a, spec.fixed.params.size());
  if (spec.axes[0].kind == spec.axes[1].kind &&
      (spec.axes[0].kind == SweepAxis::Kind::Mean ||
       spec.axes[0].index == spec.axes[1].index)) {
    throw UsageError("sweep axes must vary different parameters");
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  return parse_sweep_spec(slurp(path));
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  const std::vector<double> xs = spec.axes[0].values();
  const std::vector<double> ys = spec.axes[1].values();
  const std::size_t total = xs.size() * ys.size();
  std::vector<std::optional<SweepRow>> rows(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t c = next++; c < total; c = next++) {
      try {
        rows[c] = evaluate_cell(spec, xs[c / ys.size()], ys[c % ys.size()]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> out;
  out.reserve(total);
  for (auto& r : rows) out.push_back(std::move(*r));
  return out;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows) {
  const std::size_t n = spec.fixed.params.size();
  out << spec.axes[0].name() << ',' << spec.axes[1].name() << ",no_curve";
  for (std::size_t k = 0; k <= n; ++k) out << ",k" << k;
  out << ",equilibria\n";
  for (const SweepRow& r : rows) {
    out << format_number(r.first) << ',' << format_number(r.second) << ','
        << (r.no_curve ? 1 : 0);
    for (bool b : r.dont_care) out << ',' << (b ? 1 : 0);
    out << ',' << r.equilibria << '\n';
  }
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("CURVEGAME_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw UsageError("CURVEGAME_THREADS must be a positive integer");
    return static_cast<unsigned>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(static_cast<unsigned long>(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write " + tmp.string());
    f << contents;
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InputError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputError("cannot move output into " + path);
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  if (std::string_view(buf) == "-0") return "0";
  return buf;
}

double round_sig12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

}  // namespace curvegame::cli
