#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sprec/cli.hpp"
#include "sprec/error.hpp"
#include "sprec/io.hpp"
#include "sprec/metrics.hpp"
#include "sprec/pipeline.hpp"
#include "sprec/rng.hpp"
#include "sprec/subsampling.hpp"
#include "sprec/theory_lab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sprec::cli {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::invalid_input, what);
}

std::string numbered(const std::string& stem, std::size_t index, const std::string& ext) {
  std::ostringstream s;
  s << stem << '_' << std::setw(2) << std::setfill('0') << index << ext;
  return s.str();
}

void write_json(const fs::path& path, const json& j) { io::write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  try {
    return json::parse(io::read_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, path.string() + ": " + e.what());
  }
}

// Trace cut to its first `steps` records; the final iterate is rebuilt.
RecoveryTrace truncate(const RecoveryTrace& full, int steps) {
  RecoveryTrace t = full;
  t.steps = steps;
  t.records.resize(static_cast<std::size_t>(steps));
  t.final.matrix = full.iterate(steps);
  return t;
}

std::vector<io::Triplet> upper_triplets(const SymMatrix& m) {
  std::vector<io::Triplet> out;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i + 1; j < m.dim(); ++j)
      if (m(i, j) != 0.0) out.push_back({i + 1, j + 1, m(i, j)});
  return out;
}

std::string degree_rows(const std::string& alpha, const SupportMask& mask) {
  const auto deg = mask.row_degrees();
  const std::size_t top = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  std::vector<std::size_t> hist(top + 1, 0);
  for (auto d : deg) ++hist[d];
  std::string out;
  for (std::size_t d = 0; d <= top; ++d)
    out += alpha + "," + std::to_string(d) + "," + std::to_string(hist[d]) + "\n";
  return out;
}

// Data files listed by a generate or ingest manifest in `dir`.
std::vector<std::pair<std::string, fs::path>> data_files(const fs::path& in) {
  if (!fs::is_directory(in)) return {{in.stem().string(), in}};
  const json m = read_json(in / "manifest.json");
  if (!m.contains("data")) throw Error(ErrorKind::io, (in / "manifest.json").string() + ": no data list");
  std::vector<std::pair<std::string, fs::path>> out;
  for (const auto& d : m["data"]) {
    const std::string file = d["file"].get<std::string>();
    out.emplace_back(fs::path(file).stem().string(), in / file);
  }
  return out;
}

json recover_one(const RunConfig& cfg, const fs::path& input, const fs::path& out, std::ostream& log) {
  const Eigen::MatrixXd x = io::read_dense_csv(input);
  const auto alphas = cfg.alpha_grid();
  std::vector<int> steps;
  for (double a : alphas) steps.push_back(steps_for_alpha(a, cfg.gamma));
  const int max_steps = *std::max_element(steps.begin(), steps.end());

  PipelineSettings settings;
  settings.glasso.lambda = cfg.lambda;
  settings.center = cfg.center;
  settings.mode = cfg.search_mode();

  json manifest = {{"command", "recover"},
                   {"input", input.generic_string()},
                   {"n", x.rows()},
                   {"p", x.cols()},
                   {"lambda", cfg.lambda},
                   {"gamma", cfg.gamma},
                   {"search", cfg.strict_search ? "strict" : "fast"},
                   {"center", cfg.center}};
  json entries = json::array();
  std::string cardinality = "alpha,realized_alpha,steps,nonzeros\n";
  std::string degrees = "alpha,degree,rows\n";

  auto record = [&](std::size_t a, const SymMatrix& values, const SupportMask& mask, json extra) {
    const std::string support = numbered("support", a + 1, ".csv");
    const std::string trace = numbered("trace", a + 1, ".json");
    io::write_triplets(out / support, upper_triplets(values));
    const double realized = std::pow(cfg.gamma, -steps[a]);
    json e = {{"index", a + 1},        {"requested_alpha", alphas[a]}, {"steps", steps[a]},
              {"realized_alpha", realized}, {"support", support},   {"trace", trace},
              {"nonzeros", mask.count()}};
    e.update(extra);
    entries.push_back(e);
    const std::string as = io::format_double(alphas[a]);
    cardinality += as + "," + io::format_double(realized) + "," + std::to_string(steps[a]) + "," +
                   std::to_string(mask.count()) + "\n";
    degrees += degree_rows(as, mask);
  };

  if (!cfg.k) {
    manifest["subsample"] = nullptr;
    const auto result = run_pipeline(x, settings, cfg.gamma, max_steps);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const RecoveryTrace t = truncate(result.trace, steps[a]);
      json tj = to_json(t);
      tj["requested_alpha"] = alphas[a];
      write_json(out / numbered("trace", a + 1, ".json"), tj);
      record(a, t.final.matrix, support_of(t.final.matrix), json::object());
    }
  } else {
    SubsampleScheme scheme;
    scheme.k = *cfg.k;
    scheme.d = cfg.d;
    scheme.seed = cfg.seed;
    manifest["subsample"] = {{"k", scheme.k}, {"d", scheme.d}, {"seed", scheme.seed}};
    const auto grid = subsampled_recovery_grid(x, scheme, alphas, settings, cfg.gamma);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const auto& r = grid[a];
      // steps here are the per-block counts for alpha_sub.
      steps[a] = r.steps_per_block;
      json blocks = json::array();
      for (const auto& t : r.traces) blocks.push_back(to_json(truncate(t, r.steps_per_block)));
      const json summary = summary_json(r.combined, alphas[a]);
      write_json(out / numbered("trace", a + 1, ".json"),
                 {{"requested_alpha", alphas[a]}, {"subsample", summary}, {"blocks", blocks}});
      std::vector<io::Triplet> votes;
      for (std::size_t i = 0; i < r.combined.mask.dim(); ++i)
        for (std::size_t j = i + 1; j < r.combined.mask.dim(); ++j)
          if (const int v = r.combined.votes(i, j); v > 0) votes.push_back({i + 1, j + 1, double(v)});
      const std::string votes_file = numbered("votes", a + 1, ".csv");
      io::write_triplets(out / votes_file, votes, "votes");
      record(a, r.combined_values, r.combined.mask,
             {{"votes", votes_file}, {"subsample_summary", summary}});
    }
  }
  manifest["alphas"] = entries;
  manifest["cardinality"] = "cardinality.csv";
  manifest["degree_histogram"] = "degree_histogram.csv";
  io::write_text(out / "cardinality.csv", cardinality);
  io::write_text(out / "degree_histogram.csv", degrees);
  write_json(out / "manifest.json", manifest);
  log << "recover: " << input.generic_string() << " -> " << out.generic_string() << " ("
      << alphas.size() << " alpha values)\n";
  return manifest;
}

Eigen::MatrixXd standardize_columns(Eigen::MatrixXd x) {
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double mean = x.col(c).mean();
    x.col(c).array() -= mean;
    const double sd = std::sqrt(x.col(c).squaredNorm() / (n - 1.0));
    if (!(sd > 0.0))
      throw Error(ErrorKind::degenerate_input, "column " + std::to_string(c + 1) + " is constant",
                  static_cast<std::size_t>(c + 1));
    x.col(c) /= sd;
  }
  return x;
}

struct Summary {
  double mean = 0.0, se = 0.0;
};

Summary summarize(const std::vector<double>& v) {
  Summary s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return s;
}

}  // namespace

void RunConfig::validate() const {
  require(gamma > 1.0 && std::isfinite(gamma), "gamma must be > 1");
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be >= 0");
  // the theory experiments accept alpha = 0 (empty masks)
  const double alpha_floor = command == "theory" ? 0.0 : std::numeric_limits<double>::min();
  for (double a : alphas) require(a >= alpha_floor && a <= 1.0, "alpha out of range");
  if (k) {
    require(*k >= 1, "k must be >= 1");
    require(d >= 1 && d <= *k, "d must be in [1, k]");
  }
  require(replicates >= 1, "replicates must be >= 1");
  if (command == "generate") {
    require(model.has_value(), "generate needs --model");
    require(n >= 1, "n must be >= 1");
    require(!out.empty(), "generate needs --out");
    graph_spec();
  } else if (command == "recover") {
    require(in.size() == 1, "recover needs exactly one --in");
    require(!out.empty(), "recover needs --out");
  } else if (command == "evaluate") {
    require(!in.empty(), "evaluate needs --in");
    require(!out.empty(), "evaluate needs --out");
  } else if (command == "theory") {
    require(!experiment.empty(), "theory needs --experiment");
    require(!out.empty(), "theory needs --out");
    if (experiment == "shrink") {
      require(model.has_value(), "theory shrink needs --model");
      graph_spec();
    }
  } else if (command == "ingest") {
    require(in.size() == 1, "ingest needs exactly one --in");
    require(!out.empty(), "ingest needs --out");
  }
}

GraphSpec RunConfig::graph_spec() const {
  require(model.has_value(), "no model given");
  GraphSpec g;
  g.kind = *model;
  switch (g.kind) {
    case GraphKind::tridiagonal:
      require(p.size() == 1 && p[0] >= 1, "tridiag needs one --p >= 1");
      g.p = p[0];
      break;
    case GraphKind::binary_tree:
      require(depth >= 1, "tree needs --depth >= 1");
      g.depth = depth;
      break;
    case GraphKind::block_diagonal:
      require(blocks >= 1 && block_size >= 1, "block needs --blocks and --block-size >= 1");
      g.blocks = blocks;
      g.block_size = block_size;
      break;
  }
  return g;
}

std::vector<double> RunConfig::alpha_grid() const {
  if (!alphas.empty()) return alphas;
  std::vector<double> grid;
  for (int e = 1; e <= 10; ++e) grid.push_back(std::ldexp(1.0, -e));
  return grid;
}

void cmd_generate(const RunConfig& cfg, std::ostream& log) {
  const GraphModel model = make_model(cfg.graph_spec());
  const Sampler sampler(model);
  const fs::path out(cfg.out);
  json files = json::array();
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    const std::uint64_t seed = cfg.replicates == 1 ? cfg.seed : derive_seed(cfg.seed, r);
    const std::string file =
        cfg.replicates == 1 ? std::string("data.csv") : numbered("data", r + 1, ".csv");
    io::write_dense_csv(out / file, sampler.sample(cfg.n, seed, cfg.dist).x);
    files.push_back({{"file", file}, {"seed", seed}});
  }
  io::write_sym_triplets(out / "truth.csv", model.omega);
  write_json(out / "manifest.json", {{"command", "generate"},
                                     {"model", model.spec.to_json()},
                                     {"p", model.dim()},
                                     {"n", cfg.n},
                                     {"seed", cfg.seed},
                                     {"distribution", to_string(cfg.dist)},
                                     {"replicates", cfg.replicates},
                                     {"edges", model.truth().count()},
                                     {"truth", "truth.csv"},
                                     {"data", files}});
  log << "generate: " << cfg.replicates << " x (" << cfg.n << " x " << model.dim() << ") -> "
      << out.generic_string() << "\n";
}

void cmd_recover(const RunConfig& cfg, std::ostream& log) {
  const fs::path in(cfg.in.front());
  const fs::path out(cfg.out);
  if (!fs::is_directory(in)) {
    if (!fs::exists(in)) throw Error(ErrorKind::io, "missing input " + in.string());
    recover_one(cfg, in, out, log);
    return;
  }
  const json source = read_json(in / "manifest.json");
  json runs = json::array();
  for (const auto& [stem, path] : data_files(in)) {
    recover_one(cfg, path, out / stem, log);
    runs.push_back(stem);
  }
  json top = {{"command", "recover"}, {"input", in.generic_string()}, {"runs", runs}};
  if (source.contains("truth"))
    top["truth"] = (in / source["truth"].get<std::string>()).generic_string();
  write_json(out / "manifest.json", top);
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
  std::vector<fs::path> runs;
  std::string truth_path = cfg.truth;
  for (const auto& dir : cfg.in) {
    const fs::path d(dir);
    if (!fs::exists(d / "manifest.json")) throw Error(ErrorKind::io, "missing " + (d / "manifest.json").string());
    const json m = read_json(d / "manifest.json");
    if (m.contains("runs")) {
      for (const auto& r : m["runs"]) runs.push_back(d / r.get<std::string>());
      if (truth_path.empty() && m.contains("truth")) truth_path = m["truth"].get<std::string>();
    } else {
      runs.push_back(d);
    }
  }
  require(!truth_path.empty(), "evaluate needs --truth");
  if (!fs::exists(truth_path)) throw Error(ErrorKind::io, "missing truth file " + truth_path);

  struct Cell {
    double realized = 0.0;
    std::vector<double> fpr, tpr, fp, tp;
    std::size_t negatives = 0, positives = 0;
  };
  std::map<double, Cell, std::greater<>> cells;
  std::optional<SupportMask> truth;
  for (const auto& run : runs) {
    const json m = read_json(run / "manifest.json");
    const std::size_t p = m["p"].get<std::size_t>();
    if (!truth) truth = support_of(io::read_sym_triplets(truth_path, p));
    require(truth->dim() == p, "truth dimension differs from " + run.string());
    for (const auto& e : m["alphas"]) {
      const fs::path support = run / e["support"].get<std::string>();
      if (!fs::exists(support)) throw Error(ErrorKind::io, "missing " + support.string());
      const auto est = support_of(io::read_sym_triplets(support, p));
      const double alpha = e["requested_alpha"].get<double>();
      const auto rec = make_record(alpha, est, *truth);
      Cell& c = cells[alpha];
      c.realized = e["realized_alpha"].get<double>();
      c.fpr.push_back(rec.empirical_fpr);
      c.tpr.push_back(rec.empirical_tpr);
      c.fp.push_back(static_cast<double>(rec.fp_count));
      c.tp.push_back(static_cast<double>(rec.tp_count));
      c.negatives = rec.negatives;
      c.positives = rec.positives;
    }
  }
  std::string csv = "alpha,realized_alpha,replicates,fpr,fpr_stderr,tpr,tpr_stderr,fp,tp,neg,pos\n";
  for (const auto& [alpha, c] : cells) {
    const auto f = summarize(c.fpr), t = summarize(c.tpr);
    csv += io::format_double(alpha) + "," + io::format_double(c.realized) + "," +
           std::to_string(c.fpr.size()) + "," + io::format_double(f.mean) + "," +
           io::format_double(f.se) + "," + io::format_double(t.mean) + "," +
           io::format_double(t.se) + "," + io::format_double(summarize(c.fp).mean) + "," +
           io::format_double(summarize(c.tp).mean) + "," + std::to_string(c.negatives) + "," +
           std::to_string(c.positives) + "\n";
  }
  const fs::path out(cfg.out);
  io::write_text(out / "roc.csv", csv);
  json inputs = json::array();
  for (const auto& r : runs) inputs.push_back(r.generic_string());
  write_json(out / "manifest.json",
             {{"command", "evaluate"}, {"runs", inputs}, {"truth", truth_path}, {"table", "roc.csv"}});
  log << "evaluate: " << runs.size() << " runs, " << cells.size() << " alpha values -> "
      << (out / "roc.csv").generic_string() << "\n";
}

void cmd_theory(const RunConfig& cfg, std::ostream& log) {
  const fs::path out(cfg.out);
  json report;
  bool pass = true;
  if (cfg.experiment == "hoeffding") {
    const std::vector<std::size_t> ps = cfg.p.empty() ? std::vector<std::size_t>{200, 1000} : cfg.p;
    const std::vector<double> as = cfg.alphas.empty() ? std::vector<double>{0.5, 0.05} : cfg.alphas;
    const std::vector<double> ts = cfg.t.empty() ? std::vector<double>{3, 4, 5} : cfg.t;
    const std::size_t trials = cfg.trials ? cfg.trials : 10000;
    json reports = json::array();
    std::uint64_t cell = 0;
    for (auto p : ps)
      for (double a : as)
        for (double t : ts) {
          const auto r =
              lazy_hoeffding_tail(p, a, cfg.m_bound, t, trials, derive_seed(cfg.seed, cell++));
          pass = pass && r.pass;
          reports.push_back(r.to_json());
        }
    report = {{"experiment", "lazy_hoeffding_grid"}, {"reports", reports}, {"pass", pass}};
  } else if (cfg.experiment == "opnorm") {
    const std::vector<std::size_t> ps =
        cfg.p.empty() ? std::vector<std::size_t>{250, 500, 1000} : cfg.p;
    const double alpha = cfg.alphas.empty() ? 0.05 : cfg.alphas.front();
    const std::size_t trials = cfg.trials ? cfg.trials : 50;
    const auto r = sparse_opnorm_scaling(ps, alpha, trials, cfg.seed);
    pass = r.pass;
    report = r.to_json(alpha, trials, cfg.seed);
  } else {
    const GraphModel model = make_model(cfg.graph_spec());
    const std::size_t trials = cfg.trials ? cfg.trials : 50;
    const auto r = shrink_ratio_experiment(model, cfg.gamma, cfg.s, cfg.noise, trials, cfg.seed);
    pass = r.pass;
    report = r.to_json(model.spec, cfg.noise, trials, cfg.seed);
  }
  const std::string file = "theory_" + cfg.experiment + ".json";
  write_json(out / file, report);
  log << "theory " << cfg.experiment << ": " << (pass ? "pass" : "fail") << " -> "
      << (out / file).generic_string() << "\n";
}

void cmd_ingest(const RunConfig& cfg, std::ostream& log) {
  const fs::path in(cfg.in.front());
  const std::string text = io::read_text(in);
  std::vector<std::string> lines;
  {
    std::istringstream s(text);
    std::string line;
    while (std::getline(s, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
  }
  if (lines.empty()) throw Error(ErrorKind::empty_sample, in.string() + " has no rows");

  std::optional<std::vector<std::string>> header;
  const auto first = io::split_csv_line(lines.front());
  for (const auto& cell : first) {
    double v;
    if (!io::parse_double(cell, v)) {
      header = first;
      break;
    }
  }
  const std::size_t p = first.size();
  const std::size_t start = header ? 1 : 0;
  std::vector<std::vector<double>> rows;
  for (std::size_t l = start; l < lines.size(); ++l) {
    const auto cells = io::split_csv_line(lines[l]);
    if (cells.size() != p)
      throw Error(ErrorKind::io,
                  in.string() + ": line " + std::to_string(l + 1) + " has " +
                      std::to_string(cells.size()) + " fields, expected " + std::to_string(p),
                  l + 1);
    std::vector<double> row(p);
    for (std::size_t c = 0; c < p; ++c) {
      if (!io::parse_double(cells[c], row[c]))
        throw Error(ErrorKind::io,
                    in.string() + ": line " + std::to_string(l + 1) + " column " +
                        std::to_string(c + 1) + " is not numeric",
                    l + 1);
      if (!std::isfinite(row[c]))
        throw Error(ErrorKind::invalid_input,
                    in.string() + ": line " + std::to_string(l + 1) + " column " +
                        std::to_string(c + 1) + " is not finite",
                    l + 1);
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 3)
    throw Error(ErrorKind::insufficient_sample,
                in.string() + ": need at least 3 rows, found " + std::to_string(rows.size()),
                std::nullopt, static_cast<double>(rows.size()));
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < p; ++c)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  if (cfg.standardize) x = standardize_columns(std::move(x));

  const fs::path out(cfg.out);
  io::write_dense_csv(out / "data.csv", x);
  write_json(out / "manifest.json", {{"command", "ingest"},
                                     {"source", in.generic_string()},
                                     {"n", rows.size()},
                                     {"p", p},
                                     {"header", header ? json(*header) : json(nullptr)},
                                     {"standardized", cfg.standardize},
                                     {"data", json::array({{{"file", "data.csv"}}})}});
  log << "ingest: " << rows.size() << " x " << p << (header ? " (header skipped)" : "") << " -> "
      << out.generic_string() << "\n";
}

int execute(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    cfg.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    if (cfg.command == "generate") cmd_generate(cfg, log);
    else if (cfg.command == "recover") cmd_recover(cfg, log);
    else if (cfg.command == "evaluate") cmd_evaluate(cfg, log);
    else if (cfg.command == "theory") cmd_theory(cfg, log);
    else if (cfg.command == "ingest") cmd_ingest(cfg, log);
    return 0;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    if (!cfg.out.empty()) {
      json j = {{"command", cfg.command},
                {"error", to_string(e.kind())},
                {"message", e.what()},
                {"index", e.index() ? json(*e.index()) : json(nullptr)},
                {"value", std::isfinite(e.value()) ? json(e.value()) : json(nullptr)}};
      try {
        write_json(fs::path(cfg.out) / "error.json", j);
      } catch (const Error&) {
      }
    }
    return 2;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const UsageError& e) {
    (e.help() ? log : err) << e.what() << (e.help() ? "" : "\n");
    return e.help() ? 0 : 1;
  }
  return execute(cfg, log, err);
}

}  // namespace sprec::cli
