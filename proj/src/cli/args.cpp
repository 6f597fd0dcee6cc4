#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "sprec/cli.hpp"
#include "sprec/error.hpp"
#include "sprec/io.hpp"

namespace sprec::cli {

namespace {

const std::set<std::string> kFlags = {"standardize", "strict-search", "center"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool truthy(const std::string& v) {
  std::string l = v;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "1" || l == "true" || l == "yes" || l == "on") return true;
  if (l == "0" || l == "false" || l == "no" || l == "off") return false;
  throw UsageError("config: expected a boolean, got '" + v + "'", false);
}

}  // namespace

double parse_alpha(const std::string& text) {
  const std::string s = trim(text);
  const auto caret = s.find('^');
  double v = 0.0;
  if (caret == std::string::npos) {
    if (!io::parse_double(s, v)) throw UsageError("not a number: '" + text + "'", false);
    return v;
  }
  double base = 0.0, ex = 0.0;
  if (!io::parse_double(s.substr(0, caret), base) || !io::parse_double(s.substr(caret + 1), ex))
    throw UsageError("not a number: '" + text + "'", false);
  return std::pow(base, ex);
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key=value", false);
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw UsageError("config line " + std::to_string(lineno) + ": empty key", false);
    out.emplace_back(key, value);
  }
  return out;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  // Config file first: its entries become arguments placed before the real
  // ones, skipping keys the command line sets itself.
  std::string config_path;
  std::set<std::string> given;
  for (std::size_t a = 0; a < args.size(); ++a) {
    const std::string& tok = args[a];
    if (tok.rfind("--", 0) == 0) {
      std::string name = tok.substr(2);
      std::string inline_value;
      const auto eq = name.find('=');
      if (eq != std::string::npos) {
        inline_value = name.substr(eq + 1);
        name.resize(eq);
      }
      given.insert(name);
      if (name == "config") config_path = eq != std::string::npos ? inline_value
                                         : a + 1 < args.size() ? args[a + 1]
                                                               : "";
    }
  }

  std::vector<std::string> merged;
  if (!config_path.empty()) {
    std::string text;
    try {
      text = io::read_text(config_path);
    } catch (const Error& e) {
      throw UsageError(std::string("cannot read config: ") + e.what(), false);
    }
    const bool has_command = !args.empty() && args.front().rfind("-", 0) != 0;
    for (const auto& [key, value] : parse_config_text(text)) {
      if (key == "command") {
        if (!has_command) merged.push_back(value);
        continue;
      }
      if (key == "config") throw UsageError("config files cannot include other configs", false);
      if (given.count(key)) continue;
      if (kFlags.count(key)) {
        if (truthy(value)) merged.push_back("--" + key);
        continue;
      }
      std::stringstream parts(value);
      std::string item;
      while (std::getline(parts, item, ',')) {
        merged.push_back("--" + key);
        merged.push_back(trim(item));
      }
    }
  }
  merged.insert(merged.end(), args.begin(), args.end());

  RunConfig cfg;
  CLI::App app{"Sparse precision-matrix support recovery with false positive control", "sprec"};
  std::string model, dist = "gaussian";
  std::vector<std::string> alpha_text, t_text;
  int k = 0;
  app.add_option("command", cfg.command, "generate | recover | evaluate | theory | ingest")
      ->required()
      ->check(CLI::IsMember({"generate", "recover", "evaluate", "theory", "ingest"}));
  app.add_option("--config", config_path, "key=value file; command-line flags override it");
  app.add_option("--model", model, "tridiag | tree | block")
      ->check(CLI::IsMember({"tridiag", "tree", "block"}));
  app.add_option("--p", cfg.p, "dimension (repeatable for theory sweeps)");
  app.add_option("--depth", cfg.depth, "binary tree depth");
  app.add_option("--blocks", cfg.blocks, "number of diagonal blocks");
  app.add_option("--block-size", cfg.block_size, "block size");
  app.add_option("--n", cfg.n, "sample size");
  app.add_option("--lambda", cfg.lambda, "graphical lasso penalty");
  app.add_option("--gamma", cfg.gamma, "per-step false positive reduction factor");
  app.add_option("--alpha", alpha_text, "target false positive rate (repeatable, e.g. 2^-4)");
  app.add_option("--k", k, "number of disjoint subsamples");
  app.add_option("--d", cfg.d, "votes needed to keep an edge");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--replicates", cfg.replicates, "data sets to generate");
  app.add_option("--dist", dist, "gaussian | laplace")->check(CLI::IsMember({"gaussian", "laplace"}));
  app.add_option("--in", cfg.in, "input file or directory (repeatable for evaluate)");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--truth", cfg.truth, "ground-truth triplet CSV");
  app.add_flag("--standardize", cfg.standardize, "ingest: scale columns to mean 0, variance 1");
  app.add_flag("--strict-search", cfg.strict_search, "scan every smaller threshold candidate");
  app.add_flag("--center", cfg.center, "subtract column means before the covariance");
  app.add_option("--experiment", cfg.experiment, "theory: hoeffding | opnorm | shrink")
      ->check(CLI::IsMember({"hoeffding", "opnorm", "shrink"}));
  app.add_option("--t", t_text, "theory hoeffding: deviation level (repeatable)");
  app.add_option("--trials", cfg.trials, "Monte Carlo trials");
  app.add_option("--m-bound", cfg.m_bound, "theory hoeffding: |Z| bound");
  app.add_option("--noise", cfg.noise, "theory shrink: noise half-width");
  app.add_option("--s", cfg.s, "theory shrink: step index");

  std::vector<std::string> reversed(merged.rbegin(), merged.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), true);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what(), false);
  }

  if (!model.empty())
    cfg.model = model == "tridiag" ? GraphKind::tridiagonal
                : model == "tree"  ? GraphKind::binary_tree
                                   : GraphKind::block_diagonal;
  cfg.dist = dist == "laplace" ? Distribution::laplace : Distribution::gaussian;
  for (const auto& a : alpha_text) cfg.alphas.push_back(parse_alpha(a));
  for (const auto& a : t_text) cfg.t.push_back(parse_alpha(a));
  if (app.count("--k")) cfg.k = k;
  return cfg;
}

}  // namespace sprec::cli
