#pragma once

// Batch driver: one JSON run configuration in, one CSV or JSON document out.
//
// Config (schema_version 1):
//   command      eval | oracle | expand | converge | extract | recurrence
//   profile      inline profile document, or a path relative to the config file
//   grid         { "x": [...], "eta": [...], "t": [...],
//                  "t_geometric": {"min": a, "max": b, "count": k} }
//   n_max, n_max_list, tol, mode ("alternating" | "paper_literal"),
//   orders       [{"n": 1, "log": true}, ...]          (extract)
//   subtract_through                                   (extract)
//   thresholds   {"r_log": a, "r_plain": b}            (recurrence, optional)
//   output, format ("csv" | "doc")

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "heatasym/expansion.hpp"
#include "heatasym/profile_io.hpp"

namespace heatasym::cli {

enum class Command { Eval, Oracle, Expand, Converge, Extract, Recurrence };
enum class Format { Csv, Doc };

const char* to_string(Command command);
const char* to_string(Format format);

/// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumerical = 4;
inline constexpr int kExitVerificationFail = 5;

struct RunConfig {
  Command command = Command::Eval;
  ProfileDocument profile;
  std::vector<double> x;
  std::vector<double> eta;
  std::vector<double> t;
  int n_max = 3;
  std::vector<int> n_max_list;
  double tol = 1e-12;
  SignMode mode = SignMode::Alternating;
  std::vector<FitOrder> orders;
  int subtract_through = 0;
  std::optional<double> r_log_threshold;
  std::optional<double> r_plain_threshold;
  std::filesystem::path output;  // empty: standard output
  Format format = Format::Csv;
};

/// Parses a config object. Relative profile paths resolve against base_dir.
/// Throws ParseError for malformed documents and ValidationError for bad values.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

RunConfig load_run_config(const std::filesystem::path& path);

Format parse_format(const std::string& text);

/// Tabular result shared by both output formats.
struct Table {
  std::vector<std::string> columns;
  /// Each cell is a number, a string or a bool.
  std::vector<std::vector<nlohmann::ordered_json>> rows;
  bool verification_failed = false;
};

Table execute(const RunConfig& config);

/// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

std::string render_csv(const Table& table);
std::string render_doc(const RunConfig& config, const Table& table);

/// Executes, writes the artifact and returns the exit status. Diagnostics go to `log`.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Full command line behaviour behind the `heatasym` tool.
int main_entry(int argc, char** argv);

}  // namespace heatasym::cli
