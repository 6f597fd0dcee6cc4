#include "sprec/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace sprec::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_index(std::string_view text, std::size_t& out) {
  text = trim(text);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error(ErrorKind::io, "cannot format number");
  return std::string(buf, ptr);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

Eigen::MatrixXd read_dense_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (rows == 0) cols = fields.size();
    if (fields.size() != cols)
      throw Error(ErrorKind::io,
                  path.string() + ": ragged row at line " + std::to_string(line_no), line_no);
    for (const auto& f : fields) {
      double v = 0.0;
      if (!parse_double(f, v))
        throw Error(ErrorKind::io,
                    path.string() + ": non-numeric cell '" + f + "' at line " +
                        std::to_string(line_no),
                    line_no);
      values.push_back(v);
    }
    ++rows;
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * cols + c];
  return m;
}

void write_dense_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  std::string line;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    line.clear();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) line += ',';
      line += format_double(m(r, c));
    }
    line += '\n';
    out << line;
  }
}

SymMatrix read_sym_dense_csv(const std::filesystem::path& path) {
  return SymMatrix(read_dense_csv(path));
}

void write_triplets(const std::filesystem::path& path, const std::vector<Triplet>& entries,
                    const std::string& value_header) {
  auto out = open_out(path);
  out << "i,j," << value_header << '\n';
  for (const auto& t : entries) out << t.i << ',' << t.j << ',' << format_double(t.value) << '\n';
}

void write_sym_triplets(const std::filesystem::path& path, const SymMatrix& m,
                        const std::string& value_header) {
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j) {
      const double v = m(i, j);
      if ((i == j && v != 1.0) || (i != j && v != 0.0)) entries.push_back({i + 1, j + 1, v});
    }
  write_triplets(path, entries, value_header);
}

std::vector<Triplet> read_triplets(const std::filesystem::path& path, std::string* value_header) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<Triplet> out;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw Error(ErrorKind::io, path.string() + ": expected 3 fields at line " +
                                     std::to_string(line_no), line_no);
    if (!header_seen) {
      header_seen = true;
      if (trim(fields[0]) != "i" || trim(fields[1]) != "j")
        throw Error(ErrorKind::io, path.string() + ": missing 'i,j,<value>' header", line_no);
      if (value_header) *value_header = std::string(trim(fields[2]));
      continue;
    }
    Triplet t{};
    if (!parse_index(fields[0], t.i) || !parse_index(fields[1], t.j) ||
        !parse_double(fields[2], t.value) || t.i == 0 || t.j == 0)
      throw Error(ErrorKind::io, path.string() + ": malformed triplet at line " +
                                     std::to_string(line_no), line_no);
    out.push_back(t);
  }
  if (!header_seen) throw Error(ErrorKind::io, path.string() + ": empty triplet file");
  return out;
}

SymMatrix triplets_to_matrix(const std::vector<Triplet>& entries, std::size_t dim) {
  std::size_t inferred = dim;
  for (const auto& t : entries) {
    const std::size_t hi = std::max(t.i, t.j);
    if (dim != 0 && hi > dim)
      throw Error(ErrorKind::invalid_input, "triplet index exceeds dimension");
    inferred = std::max(inferred, hi);
  }
  if (inferred == 0) throw Error(ErrorKind::invalid_input, "cannot infer dimension of empty triplet list");
  std::map<std::pair<std::size_t, std::size_t>, double> upper;
  std::vector<Triplet> lower;
  for (const auto& t : entries) {
    if (t.i <= t.j) {
      auto [it, inserted] = upper.emplace(std::make_pair(t.i, t.j), t.value);
      if (!inserted && it->second != t.value)
        throw Error(ErrorKind::invalid_input, "conflicting duplicate triplet");
    } else {
      lower.push_back(t);
    }
  }
  for (const auto& t : lower) {
    auto it = upper.find({t.j, t.i});
    if (it == upper.end() || it->second != t.value)
      throw Error(ErrorKind::invalid_input,
                  "asymmetric triplet (" + std::to_string(t.i) + "," + std::to_string(t.j) + ")");
  }
  const auto n = static_cast<Eigen::Index>(inferred);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [ij, v] : upper) {
    const auto i = static_cast<Eigen::Index>(ij.first - 1);
    const auto j = static_cast<Eigen::Index>(ij.second - 1);
    m(i, j) = v;
    m(j, i) = v;
  }
  return SymMatrix(std::move(m));
}

SymMatrix read_sym_triplets(const std::filesystem::path& path, std::size_t dim) {
  return triplets_to_matrix(read_triplets(path), dim);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sprec::io
