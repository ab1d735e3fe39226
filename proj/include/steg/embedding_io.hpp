#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "steg/csv.hpp"
#include "steg/error.hpp"
#include "steg/types.hpp"

namespace steg {

/// Edge-embedding matrix with the source-table row of every embedding row.
struct StoredEmbeddings {
  std::vector<std::uint64_t> row_index;
  Matrix values;
};

inline constexpr char kEmbeddingMagic[8] = {'S', 'T', 'E', 'G', 'E', 'M', 'B', '1'};

/// Binary layout (host byte order): magic "STEGEMB1", u64 rows, u64 cols,
/// then per row: u64 row_index, cols × f64.
inline void write_embeddings(std::ostream& out, const StoredEmbeddings& e) {
  if (e.row_index.size() != static_cast<std::size_t>(e.values.rows())) {
    throw Error(ErrorCode::DimensionMismatch, "one row index per embedding row required");
  }
  const std::uint64_t rows = static_cast<std::uint64_t>(e.values.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(e.values.cols());
  out.write(kEmbeddingMagic, sizeof(kEmbeddingMagic));
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  for (Eigen::Index i = 0; i < e.values.rows(); ++i) {
    out.write(reinterpret_cast<const char*>(&e.row_index[static_cast<std::size_t>(i)]), sizeof(std::uint64_t));
    out.write(reinterpret_cast<const char*>(e.values.row(i).data()),
              static_cast<std::streamsize>(cols * sizeof(double)));
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing embeddings");
}

inline StoredEmbeddings read_embeddings(std::istream& in, const std::string& source = "<stream>") {
  char magic[8];
  std::uint64_t rows = 0, cols = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!in || std::memcmp(magic, kEmbeddingMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::Io, source + " is not an embedding file");
  }
  StoredEmbeddings e;
  e.row_index.resize(rows);
  e.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < e.values.rows(); ++i) {
    in.read(reinterpret_cast<char*>(&e.row_index[static_cast<std::size_t>(i)]), sizeof(std::uint64_t));
    in.read(reinterpret_cast<char*>(e.values.row(i).data()), static_cast<std::streamsize>(cols * sizeof(double)));
  }
  if (!in) throw Error(ErrorCode::Io, source + " is truncated");
  return e;
}

inline void write_embeddings(const std::string& path, const StoredEmbeddings& e) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  write_embeddings(out, e);
}

inline StoredEmbeddings read_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_embeddings(in, path);
}

/// CSV alternative: row_index, e0, e1, ...
inline void write_embeddings_csv(std::ostream& out, const StoredEmbeddings& e) {
  std::vector<std::string> fields{"row_index"};
  for (Eigen::Index j = 0; j < e.values.cols(); ++j) fields.push_back("e" + std::to_string(j));
  csv::write_row(out, fields);
  for (Eigen::Index i = 0; i < e.values.rows(); ++i) {
    fields.assign(1, std::to_string(e.row_index[static_cast<std::size_t>(i)]));
    for (Eigen::Index j = 0; j < e.values.cols(); ++j) fields.push_back(csv::format_double(e.values(i, j)));
    csv::write_row(out, fields);
  }
}

}  // namespace steg
