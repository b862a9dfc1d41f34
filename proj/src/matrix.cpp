#include "persist/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "persist/errors.hpp"

namespace persist {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::RowSumViolation: return "RowSumViolation";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotAClass: return "NotAClass";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotPeripheral: return "NotPeripheral";
    case ErrorKind::NotInRange: return "NotInRange";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::IdempotentVerificationFailed: return "IdempotentVerificationFailed";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("DenseMatrix: entry count does not match shape");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.front().size();
  std::vector<double> entries;
  entries.reserve(n_rows * n_cols);
  for (const auto& r : rows) {
    if (r.size() != n_cols) throw std::invalid_argument("DenseMatrix: ragged rows");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return DenseMatrix(n_rows, n_cols, std::move(entries));
}

RealVector DenseMatrix::column(std::size_t j) const {
  RealVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

DenseMatrix DenseMatrix::block(std::size_t row0, std::size_t col0, std::size_t n_rows,
                               std::size_t n_cols) const {
  if (row0 + n_rows > rows_ || col0 + n_cols > cols_) {
    throw std::out_of_range("DenseMatrix::block out of range");
  }
  DenseMatrix b(n_rows, n_cols);
  for (std::size_t i = 0; i < n_rows; ++i)
    for (std::size_t j = 0; j < n_cols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
  return b;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<std::vector<double>> DenseMatrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto r = row(i);
    out[i].assign(r.begin(), r.end());
  }
  return out;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("DenseMatrix: shape mismatch in +=");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("DenseMatrix: shape mismatch in -=");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double factor) {
  for (double& v : data_) v *= factor;
  return *this;
}

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs += rhs; }
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs -= rhs; }
DenseMatrix operator*(double factor, DenseMatrix m) { return m *= factor; }

DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw std::invalid_argument("DenseMatrix: shape mismatch in product");
  }
  DenseMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const double a = lhs(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

RealVector operator*(const DenseMatrix& m, std::span<const double> x) {
  if (m.cols() != x.size()) {
    throw std::invalid_argument("DenseMatrix: shape mismatch in matrix-vector product");
  }
  RealVector y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

DenseMatrix mat_power(const DenseMatrix& a, std::size_t k) {
  if (!a.is_square()) throw std::invalid_argument("mat_power: matrix not square");
  DenseMatrix result = DenseMatrix::identity(a.rows());
  DenseMatrix base = a;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

double inf_op_norm(const DenseMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double v : a.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double sup_norm(std::span<const double> x) {
  double best = 0.0;
  for (double v : x) best = std::max(best, std::abs(v));
  return best;
}

RealVector hadamard(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("hadamard: length mismatch");
  RealVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

RealVector subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("subtract: length mismatch");
  RealVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RealVector ones(std::size_t n) { return RealVector(n, 1.0); }

DenseMatrix permute_symmetric(const DenseMatrix& a, std::span<const std::size_t> order) {
  const std::size_t n = order.size();
  if (!a.is_square() || a.rows() != n) {
    throw std::invalid_argument("permute_symmetric: size mismatch");
  }
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(order[i], order[j]);
  return out;
}

RowReduction row_reduce(const DenseMatrix& a, double threshold) {
  DenseMatrix w = a;
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  std::vector<std::size_t> col_of(n);
  std::iota(col_of.begin(), col_of.end(), std::size_t{0});
  RowReduction out;
  for (std::size_t step = 0; step < std::min(m, n); ++step) {
    std::size_t pr = step, pc = step;
    double best = -1.0;
    for (std::size_t i = step; i < m; ++i)
      for (std::size_t j = step; j < n; ++j)
        if (std::abs(w(i, j)) > best) {
          best = std::abs(w(i, j));
          pr = i;
          pc = j;
        }
    if (!(best > threshold)) break;
    if (pr != step)
      for (std::size_t j = 0; j < n; ++j) std::swap(w(pr, j), w(step, j));
    if (pc != step) {
      for (std::size_t i = 0; i < m; ++i) std::swap(w(i, pc), w(i, step));
      std::swap(col_of[pc], col_of[step]);
    }
    const double pivot = w(step, step);
    for (std::size_t i = step + 1; i < m; ++i) {
      const double f = w(i, step) / pivot;
      if (f == 0.0) continue;
      for (std::size_t j = step; j < n; ++j) w(i, j) -= f * w(step, j);
    }
    out.pivot_columns.push_back(col_of[step]);
    ++out.rank;
  }
  return out;
}

double default_rank_threshold(const DenseMatrix& a) {
  const double n = static_cast<double>(std::max(a.rows(), a.cols()));
  return std::max(1e-7, n * std::numeric_limits<double>::epsilon() * inf_op_norm(a));
}

std::size_t numerical_rank(const DenseMatrix& a, double threshold) {
  return row_reduce(a, threshold).rank;
}

std::size_t numerical_rank(const DenseMatrix& a) {
  return numerical_rank(a, default_rank_threshold(a));
}

DenseMatrix from_columns(const std::vector<RealVector>& columns) {
  if (columns.empty()) return {};
  const std::size_t n = columns.front().size();
  DenseMatrix m(n, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != n) throw std::invalid_argument("from_columns: ragged input");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

namespace {

// Rescales a nonnegative row so that its left-to-right sum is exactly 1,
// absorbing the last rounding residue into the largest entry.
void renormalize_row(std::span<double> row) {
  const double s = std::accumulate(row.begin(), row.end(), 0.0);
  if (s == 1.0) return;
  for (double& v : row) v /= s;
  // Entries after the last nonzero one add nothing, so solving for that entry
  // makes the left-to-right sum exactly 1.
  std::size_t last = row.size();
  while (last > 0 && row[last - 1] == 0.0) --last;
  if (last == 0) return;
  const double prefix = std::accumulate(row.begin(), row.begin() + (last - 1), 0.0);
  const double solved = 1.0 - prefix;
  if (solved >= 0.0) {
    row[last - 1] = solved;
    return;
  }
  auto largest = std::max_element(row.begin(), row.end());
  for (int pass = 0; pass < 4; ++pass) {
    const double t = std::accumulate(row.begin(), row.end(), 0.0);
    if (t == 1.0) break;
    *largest += 1.0 - t;
  }
}

}  // namespace

StochasticMatrix make_stochastic(const DenseMatrix& m, double validation_tol) {
  if (!(validation_tol > 0.0)) {
    throw std::invalid_argument("make_stochastic: validation_tol must be positive");
  }
  if (m.rows() == 0 || !m.is_square()) {
    std::ostringstream os;
    os << "matrix is not square (" << m.rows() << "x" << m.cols() << ")";
    throw InputError(ErrorKind::NonSquare, os.str());
  }
  const std::size_t n = m.rows();
  std::vector<double> entries(m.data().begin(), m.data().end());
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> row(entries.data() + i * n, n);
    for (std::size_t j = 0; j < n; ++j) {
      double& v = row[j];
      if (!std::isfinite(v) || v < -validation_tol) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << ") = " << v
           << (std::isfinite(v) ? " is negative beyond tolerance" : " is not finite");
        throw InputError(ErrorKind::NegativeEntry, os.str());
      }
      if (v < 0.0) v = 0.0;
    }
    const double s = std::accumulate(row.begin(), row.end(), 0.0);
    if (std::abs(s - 1.0) > validation_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << i << " sums to " << s;
      throw InputError(ErrorKind::RowSumViolation, os.str());
    }
    renormalize_row(row);
  }
  return StochasticMatrix(DenseMatrix(n, n, std::move(entries)));
}

StochasticMatrix make_stochastic(const std::vector<std::vector<double>>& rows,
                                 double validation_tol) {
  const std::size_t n = rows.size();
  for (const auto& r : rows) {
    if (r.size() != n) {
      std::ostringstream os;
      os << "matrix is not square: " << n << " rows, a row of length " << r.size();
      throw InputError(ErrorKind::NonSquare, os.str());
    }
  }
  return make_stochastic(DenseMatrix::from_rows(rows), validation_tol);
}

}  // namespace persist
