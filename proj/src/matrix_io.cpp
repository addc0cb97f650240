#include "cccp/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cccp {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix read_matrix(std::istream& in) {
  long long d = 0;
  if (!(in >> d) || d <= 0) {
    throw Error(ErrorKind::IoError, "matrix file: missing or invalid dimension");
  }
  Matrix m(d, d);
  for (long long i = 0; i < d; ++i) {
    for (long long j = 0; j < d; ++j) {
      if (!(in >> m(i, j))) {
        std::ostringstream os;
        os << "matrix file: expected " << d * d << " entries, read " << i * d + j;
        throw Error(ErrorKind::IoError, os.str());
      }
    }
  }
  return m;
}

SpdMatrix read_spd(std::istream& in) {
  return SpdMatrix::symmetrized(read_matrix(in));
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix(in);
}

SpdMatrix read_spd_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_spd(in);
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  write_matrix(out, m);
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

Matrix read_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw Error(ErrorKind::IoError, "rows file: bad number in '" + line + "'");
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::IoError, "rows file: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::IoError, "rows file: no data");
  Matrix out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j];
  }
  return out;
}

Matrix read_rows_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_rows(in);
}

void write_rows(std::ostream& out, const Matrix& rows) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(rows(i, j));
    }
    out << '\n';
  }
}

}  // namespace cccp
