#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bsdl/types.hpp"

namespace bsdl {

enum class MatrixFormat { Csv, Binary };

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void put_u64le(std::ostream& os, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(bytes, 8);
}

inline std::uint64_t get_u64le(std::istream& is) {
  unsigned char bytes[8];
  is.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

inline std::vector<double> parse_csv_row(const std::string& line,
                                         const std::string& path, int lineno) {
  std::vector<double> row;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string field = line.substr(pos, comma - pos);
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0'))
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": cannot parse numeric field '" + field + "'");
    row.push_back(v);
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return row;
}

}  // namespace detail

inline void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << detail::format_double(m(r, c));
    }
    os << '\n';
  }
  if (!os) throw IoError("failed writing '" + path + "'");
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(detail::parse_csv_row(line, path, lineno));
    if (rows.back().size() != rows.front().size())
      throw IoError(path + ":" + std::to_string(lineno) + ": ragged row (" +
                    std::to_string(rows.back().size()) + " fields, expected " +
                    std::to_string(rows.front().size()) + ")");
  }
  if (rows.empty()) throw IoError(path + ": empty matrix file");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

// Binary layout: "BDL1", u64le rows, u64le cols, then rows*cols f64le values
// in column-major order.
inline void write_matrix_bin(const std::string& path, const Matrix& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os.write("BDL1", 4);
  detail::put_u64le(os, static_cast<std::uint64_t>(m.rows()));
  detail::put_u64le(os, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      detail::put_u64le(os, std::bit_cast<std::uint64_t>(m(r, c)));
  if (!os) throw IoError("failed writing '" + path + "'");
}

inline Matrix read_matrix_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "BDL1")
    throw IoError(path + ": bad magic, not a BDL1 matrix file");
  const std::uint64_t rows = detail::get_u64le(is);
  const std::uint64_t cols = detail::get_u64le(is);
  if (!is || rows == 0 || cols == 0 || rows > (1u << 24) || cols > (1u << 24))
    throw IoError(path + ": implausible matrix dimensions");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      m(r, c) = std::bit_cast<double>(detail::get_u64le(is));
  if (!is) throw IoError(path + ": truncated matrix data");
  return m;
}

inline void write_matrix(const std::string& path, const Matrix& m, MatrixFormat fmt) {
  if (fmt == MatrixFormat::Csv)
    write_matrix_csv(path, m);
  else
    write_matrix_bin(path, m);
}

inline Matrix read_matrix(const std::string& path, MatrixFormat fmt) {
  return fmt == MatrixFormat::Csv ? read_matrix_csv(path) : read_matrix_bin(path);
}

// Block structure file: one CSV line of K labels, then "s=<max block size>".
inline void write_block_structure(const std::string& path, const BlockStructure& d) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  const auto& labels = d.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) os << ',';
    os << labels[i];
  }
  os << "\ns=" << d.max_block_size() << '\n';
  if (!os) throw IoError("failed writing '" + path + "'");
}

inline BlockStructure read_block_structure(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(is, line)) throw IoError(path + ": missing label line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<int> labels;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      labels.push_back(std::stoi(field));
    } catch (const std::exception&) {
      throw IoError(path + ": cannot parse block label '" + field + "'");
    }
  }
  std::string sline;
  if (!std::getline(is, sline)) throw IoError(path + ": missing 's=' line");
  if (!sline.empty() && sline.back() == '\r') sline.pop_back();
  if (sline.rfind("s=", 0) != 0)
    throw IoError(path + ": expected 's=<int>' on line 2, got '" + sline + "'");
  int s = 0;
  try {
    s = std::stoi(sline.substr(2));
  } catch (const std::exception&) {
    throw IoError(path + ": cannot parse '" + sline + "'");
  }
  try {
    return BlockStructure(std::move(labels), s);
  } catch (const Error& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace bsdl
