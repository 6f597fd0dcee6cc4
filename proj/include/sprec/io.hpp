#pragma once

// File formats:
//   dense CSV    rows of comma-separated decimals, no header
//   triplet CSV  header "i,j,value", 1-based indices, upper triangle only,
//                diagonal implied 1 unless listed

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sprec/matrix.hpp"

namespace sprec::io {

/// Shortest round-trip decimal representation.
std::string format_double(double x);

/// Parses one decimal field; returns false on trailing garbage or empty input.
bool parse_double(std::string_view text, double& out);

std::vector<std::string> split_csv_line(const std::string& line);

/// Rectangular dense CSV. Throws io on ragged rows or non-numeric cells; the
/// error index is the 1-based line number.
Eigen::MatrixXd read_dense_csv(const std::filesystem::path& path);
void write_dense_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

SymMatrix read_sym_dense_csv(const std::filesystem::path& path);

struct Triplet {
  std::size_t i;  // 1-based
  std::size_t j;
  double value;
};

/// Off-diagonal nonzeros of `m` (upper triangle); the diagonal is written
/// only where it differs from 1.
void write_sym_triplets(const std::filesystem::path& path, const SymMatrix& m,
                        const std::string& value_header = "value");
void write_triplets(const std::filesystem::path& path, const std::vector<Triplet>& entries,
                    const std::string& value_header = "value");

std::vector<Triplet> read_triplets(const std::filesystem::path& path,
                                   std::string* value_header = nullptr);

/// Rebuilds the symmetric matrix. `dim` == 0 infers it from the largest index.
/// Lower-triangle rows are accepted only when they mirror an identical upper
/// entry; anything else is rejected as asymmetric.
SymMatrix triplets_to_matrix(const std::vector<Triplet>& entries, std::size_t dim = 0);

SymMatrix read_sym_triplets(const std::filesystem::path& path, std::size_t dim = 0);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace sprec::io
