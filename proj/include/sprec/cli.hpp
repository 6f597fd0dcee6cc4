#pragma once

// Command-line driver: generate | recover | evaluate | theory | ingest.
// Every command writes into an output directory and a manifest.json that
// names each file it produced.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sprec/support_search.hpp"
#include "sprec/synthdata.hpp"

namespace sprec::cli {

struct RunConfig {
  std::string command;
  std::optional<GraphKind> model;
  std::vector<std::size_t> p;  // one value except for theory sweeps
  std::size_t depth = 0;
  std::size_t blocks = 0;
  std::size_t block_size = 0;
  std::size_t n = 50;
  double lambda = 1.0;
  double gamma = 2.0;
  std::vector<double> alphas;  // empty: 2^-1 ... 2^-10
  std::optional<int> k;        // set: split-and-vote recovery
  int d = 2;
  std::uint64_t seed = 1;
  std::size_t replicates = 1;
  Distribution dist = Distribution::gaussian;
  std::vector<std::string> in;
  std::string out;
  std::string truth;
  bool standardize = false;
  bool strict_search = false;
  bool center = false;
  // theory
  std::string experiment;
  std::vector<double> t;
  std::size_t trials = 0;  // 0: experiment default
  double m_bound = 1.0;
  double noise = 1.0;
  int s = 1;

  /// Checks the fields the command uses. Throws Error(invalid_input).
  void validate() const;
  GraphSpec graph_spec() const;
  std::vector<double> alpha_grid() const;
  SearchMode search_mode() const { return strict_search ? SearchMode::strict : SearchMode::fast; }
};

/// Bad command line or config file. `help` marks a --help request whose text
/// is in what().
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& text, bool help) : std::runtime_error(text), help_(help) {}
  bool help() const noexcept { return help_; }

 private:
  bool help_;
};

/// key=value lines; '#' starts a comment; list values are comma separated.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

/// Arguments after the program name. Config-file values apply only to keys
/// not given on the command line.
RunConfig parse_args(const std::vector<std::string>& args);

/// Accepts decimals and powers written as "b^e" (e.g. 2^-4).
double parse_alpha(const std::string& text);

void cmd_generate(const RunConfig& config, std::ostream& log);
void cmd_recover(const RunConfig& config, std::ostream& log);
void cmd_evaluate(const RunConfig& config, std::ostream& log);
void cmd_theory(const RunConfig& config, std::ostream& log);
void cmd_ingest(const RunConfig& config, std::ostream& log);

/// Dispatches the command. Exit codes: 0 success, 1 usage, 2 runtime error
/// (with error.json in the output directory when one was given).
int execute(const RunConfig& config, std::ostream& log, std::ostream& err);

int run_cli(const std::vector<std::string>& args, std::ostream& log, std::ostream& err);

}  // namespace sprec::cli
