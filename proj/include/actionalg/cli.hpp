#pragma once

// Experiment runner behind the command-line tool: flat key-value configs,
// deterministic CSV rows and the exit-code contract
//   0 PASS, 1 FALSIFIED, 2 INCONCLUSIVE, 3 config/usage error.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "actionalg/dynamics.hpp"
#include "actionalg/groups.hpp"
#include "actionalg/operators.hpp"

namespace actionalg::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFalsified = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 3;

inline constexpr std::string_view kCsvHeader =
    "experiment,param_hash,index,bound,estimate,residual,support,converged,verdict";

/// Thrown for anything that maps to exit code 3.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Ordered key -> value map read from "dotted.key = value" lines.
struct RawConfig {
  std::map<std::string, std::string> entries;
  std::map<std::string, int> line_of;
};

RawConfig parse_config_text(std::string_view text);
RawConfig load_config_file(const std::string& path);

struct ExperimentConfig {
  std::string experiment;
  Presentation presentation = Presentation::free_group({"a", "b"});
  std::map<std::string, std::string> elements;
  std::map<std::string, std::string> operators;

  int J_max = 8;
  std::vector<int> J_list;
  std::vector<int> numeric_J;
  std::vector<int> N_list;
  int L = 6;
  int R = 2;
  double c_min = 0.5;
  double C = kDefaultConstant;
  int pairs = 100;
  int l = 1;
  int k = 1;
  std::size_t ball_cap = kDefaultBallCap;
  NormBudget norm;

  std::uint64_t seed = 0;
  double slack = kDefaultSlack;
  std::string output_path;
  bool svg = false;

  /// Canonical "key=value" lines of the effective configuration.
  std::vector<std::string> echo;
};

/// Validates a raw config; `experiment` overrides the config's own key when set.
ExperimentConfig build_config(const RawConfig& raw, const std::string& experiment);

/// 64-bit FNV-1a over the canonical echo, as 16 hex digits.
std::string param_hash(const ExperimentConfig& config);

/// Fixed 12-significant-digit decimal, no locale.
std::string format_decimal(double x);

/// "c*word + c*word ..." with c real, "(re,im)" or "<real>i"; a bare word has c = 1.
FormalOperator parse_operator(const Group& group, std::string_view text);
std::string render_operator(const Group& group, const FormalOperator& T);

/// Random element of CG with support <= max_support and word length <= max_length.
FormalOperator random_operator(const Group& group, std::mt19937_64& rng, int max_support,
                               int max_length);

struct ResultRow {
  std::string experiment;
  std::string param_hash;
  long long index = 0;
  double bound = 0.0;
  double estimate = 0.0;
  double residual = 0.0;
  std::size_t support = 0;
  bool converged = true;
  Verdict verdict = Verdict::kPass;
};

std::string csv_line(const ResultRow& row);

struct RunResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> summary;
  /// Text of the witnessing vector or words when something was falsified.
  std::string witness;
  int exit_code = kExitPass;
};

/// Runs one experiment. Budget overflow mid-run returns the rows so far with
/// exit code 2; configuration problems throw ConfigError.
RunResult run(const ExperimentConfig& config);

std::string render_csv(const RunResult& result);
std::string render_summary(const ExperimentConfig& config, const RunResult& result);
std::string render_svg(const RunResult& result);

/// Writes <prefix>.csv, <prefix>.summary.txt and optionally <prefix>.svg and
/// <prefix>.witness.txt.
void write_artifacts(const ExperimentConfig& config, const RunResult& result,
                     const std::string& prefix);

}  // namespace actionalg::cli
