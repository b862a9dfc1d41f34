#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace persist {

inline constexpr double kDefaultValidationTol = 1e-9;

using RealVector = std::vector<double>;

// Dense real matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  // Throws std::invalid_argument on ragged input.
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

  RealVector column(std::size_t j) const;
  DenseMatrix block(std::size_t row0, std::size_t col0, std::size_t n_rows,
                    std::size_t n_cols) const;
  DenseMatrix transposed() const;
  std::vector<std::vector<double>> to_rows() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double factor);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator*(double factor, DenseMatrix m);
DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs);
RealVector operator*(const DenseMatrix& m, std::span<const double> x);

// A^k by binary exponentiation; A^0 is the identity.
DenseMatrix mat_power(const DenseMatrix& a, std::size_t k);

// Operator norm induced by the sup-norm: the largest absolute row sum.
double inf_op_norm(const DenseMatrix& a);

double sup_norm(std::span<const double> x);
RealVector hadamard(std::span<const double> a, std::span<const double> b);
RealVector subtract(std::span<const double> a, std::span<const double> b);
RealVector ones(std::size_t n);

// Result(i, j) = a(order[i], order[j]); order[k] is the state placed at k.
DenseMatrix permute_symmetric(const DenseMatrix& a, std::span<const std::size_t> order);

// Gaussian elimination with complete pivoting. Pivots with magnitude at or
// below `threshold` terminate the elimination. `pivot_columns` lists the
// original column indices chosen, in pivot order.
struct RowReduction {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_columns;
};

RowReduction row_reduce(const DenseMatrix& a, double threshold);

// max(1e-7, n * eps * ||a||_inf)
double default_rank_threshold(const DenseMatrix& a);

std::size_t numerical_rank(const DenseMatrix& a, double threshold);
std::size_t numerical_rank(const DenseMatrix& a);

// Matrix whose columns are the given vectors (all of equal length).
DenseMatrix from_columns(const std::vector<RealVector>& columns);

// Row-stochastic square matrix. Only make_stochastic constructs one, so every
// instance satisfies: entries >= 0 and every row sums to 1.
class StochasticMatrix {
 public:
  std::size_t size() const noexcept { return m_.rows(); }
  const DenseMatrix& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  explicit StochasticMatrix(DenseMatrix m) : m_(std::move(m)) {}
  friend StochasticMatrix make_stochastic(const DenseMatrix&, double);

  DenseMatrix m_;
};

// Validates and repairs within tolerance: entries in [-tol, 0) are clamped to
// 0 and rows renormalized. Throws InputError (NonSquare, NegativeEntry,
// RowSumViolation) otherwise.
StochasticMatrix make_stochastic(const DenseMatrix& m,
                                 double validation_tol = kDefaultValidationTol);
StochasticMatrix make_stochastic(const std::vector<std::vector<double>>& rows,
                                 double validation_tol = kDefaultValidationTol);

}  // namespace persist
