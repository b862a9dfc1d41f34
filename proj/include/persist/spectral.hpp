#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "persist/chain_structure.hpp"
#include "persist/matrix.hpp"

namespace persist {

using Complex = std::complex<double>;

inline constexpr double kDefaultProjTol = 1e-8;
inline constexpr int kDefaultMaxSquarings = 64;
inline constexpr int kDefaultGapIters = 20;
inline constexpr std::size_t kDefaultDecoherenceTmax = 1'000'000;

// A complex matrix carried as its real and imaginary parts.
struct ComplexMatrix {
  DenseMatrix re;
  DenseMatrix im;
};

double inf_op_norm(const ComplexMatrix& a);

// Limit of A^{L 2^m} obtained by squaring from A^L until two consecutive
// iterates differ by at most `tol` in the inf-norm. Works for any square
// matrix whose peripheral eigenvalues are L-th roots of unity and whose
// remaining spectrum lies strictly inside the unit disk.
// Throws ConvergenceError(NoConvergence) after `max_squarings` squarings.
DenseMatrix power_limit(const DenseMatrix& a, std::size_t l, double tol = kDefaultProjTol,
                        int max_squarings = kDefaultMaxSquarings);

DenseMatrix peripheral_projection(const StochasticMatrix& s, const ReducedForm& rf,
                                  double proj_tol = kDefaultProjTol,
                                  int max_squarings = kDefaultMaxSquarings);

// E_1 = (1/L) sum_{m<L} S^m P.
DenseMatrix ergodic_projection(const StochasticMatrix& s, const DenseMatrix& p, std::size_t l);

// Literal average (1/n) sum_{k<n} A^k.
DenseMatrix cesaro_mean(const DenseMatrix& a, std::size_t n);

// Multiset union over classes of the d_j-th roots of unity, class by class,
// each class listed as exp(2 pi i k / d_j) for k = 0..d_j-1.
std::vector<Complex> peripheral_spectrum(const ReducedForm& rf);

// Peripheral values without repetition, in first-appearance order.
std::vector<Complex> distinct_peripheral_values(const ReducedForm& rf);

// E_lambda = (1/L) sum_{m<L} lambda^{-m} S^m P.
// Throws ArgumentError(NotPeripheral) unless lambda^L = 1 within 1e-12 and
// lambda is one of the predicted peripheral values.
ComplexMatrix eigenprojection(const StochasticMatrix& s, const DenseMatrix& p,
                              const ReducedForm& rf, Complex lambda);

// 1 - r, with r the radius estimate ||(S(I-P))^{2^m}||^{1/2^m}. The iterates
// are renormalized at each squaring so that deep exponents do not underflow;
// the loop stops early once the iterate vanishes. Always in (0, 1].
double mass_gap_estimate(const StochasticMatrix& s, const DenseMatrix& p,
                         int iters = kDefaultGapIters);

// Smallest t >= 0 with ||S^t (I-P)|| <= eps, by linear scan.
// Throws ConvergenceError(Timeout) past t_max.
std::size_t decoherence_time(const StochasticMatrix& s, const DenseMatrix& p, double eps,
                             std::size_t t_max = kDefaultDecoherenceTmax);

// ||S^{L 2^m} - P|| for m = 0..m_max.
std::vector<double> subsequence_residuals(const StochasticMatrix& s, const DenseMatrix& p,
                                          std::size_t l, std::size_t m_max);

// One stationary distribution per recurrent class: the row of E_1 at the
// class's smallest state.
std::vector<RealVector> stationary_distributions(const DenseMatrix& e1, const ReducedForm& rf);

struct SpectralOptions {
  double proj_tol = kDefaultProjTol;
  int max_squarings = kDefaultMaxSquarings;
  int gap_iters = kDefaultGapIters;
};

struct SpectralData {
  DenseMatrix projection;   // P
  DenseMatrix ergodic;      // E_1
  std::size_t lcm_period = 1;
  std::vector<Complex> peripheral_values;
  double gap_estimate = 1.0;
  std::size_t rank_projection = 0;
  std::size_t rank_ergodic = 0;
};

// Computes P, E_1, the predicted peripheral spectrum and the gap, then checks
// P^2 = P, SP = PS, P1 = 1 (within proj_tol), stochasticity of P and the two
// rank identities. Throws VerificationError on any failure.
SpectralData analyze_spectrum(const StochasticMatrix& s, const ReducedForm& rf,
                              const SpectralOptions& options = {});

}  // namespace persist
