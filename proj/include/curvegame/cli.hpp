#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "curvegame/core.hpp"

namespace curvegame::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kMalformedInput = 1,
  kInvalidInput = 2,
  kNonConvergence = 3,
  kVerifyMismatch = 4,
};

/// Unreadable or syntactically broken input (exit 1).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that fails a semantic check (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  GameParams params;
  std::string label;
};

/// {"m": number, "alpha": [number, ...], "label"?: string}. Duplicate keys
/// and unknown keys are malformed input; out-of-range values raise
/// ParamError.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

struct SweepAxis {
  enum class Kind { Alpha, Mean };
  Kind kind;
  std::size_t index = 0;
  double lo;
  double hi;
  double step;

  std::vector<double> values() const;
  std::string name() const;
};

struct SweepSpec {
  std::array<SweepAxis, 2> axes;
  Instance fixed;
};

SweepSpec parse_sweep_spec(std::string_view text);
SweepSpec load_sweep_spec(const std::string& path);

struct SweepRow {
  double first;
  double second;
  bool no_curve;
  std::vector<bool> dont_care;  // index k = 0..n
  std::size_t equilibria;
};

/// Evaluates every cell, first axis outer. Rows come back in row-major order
/// whatever the thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads);
void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);

/// Thread cap from CURVEGAME_THREADS, else hardware concurrency.
unsigned sweep_threads();

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_atomically(const std::string& path, const std::string& contents);

/// Twelve significant digits, shared by JSON and CSV output.
std::string format_number(double v);
double round_sig12(double v);

struct SolveOptions {
  std::string instance;
};

struct BrOptions {
  std::string instance;
  std::size_t player = 0;
  std::optional<double> mean;
  std::optional<double> grid;
};

struct SweepOptions {
  std::string spec;
  std::optional<std::string> out;
};

struct DynamicsCliOptions {
  std::string instance;
  std::string which = "greatest";
  std::optional<std::string> trace;
  std::size_t max_iter = 100000;
  double tol = 1e-10;
};

struct VerifyOptions {
  std::string instance;
  double step = 1e-3;
  bool br_only = false;
  std::optional<double> inflation;
  std::size_t br_samples = 200;
};

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err);
int cmd_br(const BrOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err);
int cmd_dynamics(const DynamicsCliOptions& opt, std::ostream& out,
                 std::ostream& err);
int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace curvegame::cli
