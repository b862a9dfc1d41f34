#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "persist/chain_structure.hpp"
#include "persist/matrix.hpp"

namespace persist {

inline constexpr double kDefaultAlgTol = 1e-8;
// Residual that a proper divisor of L must exceed for the order to count as exact.
inline constexpr double kOrderSeparation = 1e-4;

// Columns of P selected by complete-pivoting row reduction, re-projected by P
// and rescaled to unit sup-norm, in ascending column order. Throws
// VerificationError(RankMismatch) when `expected_rank` is given and differs.
std::vector<RealVector> persistent_basis(const DenseMatrix& p,
                                         std::optional<std::size_t> expected_rank = {});

// a o b := P(a . b). Throws ArgumentError(NotInRange) if a or b is not fixed
// by P within tol (relative to max(1, |x|)).
RealVector ce_product(const DenseMatrix& p, std::span<const double> a,
                      std::span<const double> b, double tol = kDefaultAlgTol);

// ||P(a . b) - a . b||, the failure of range(P) to be closed under the
// pointwise product at (a, b).
double pointwise_closure_residual(const DenseMatrix& p, std::span<const double> a,
                                  std::span<const double> b);

struct PersistentAlgebra {
  std::vector<RealVector> basis;
  DenseMatrix projection;
  std::size_t lcm_period = 1;
  std::vector<RealVector> idempotents;  // class by class, cyclic class by cyclic class
  RealVector unit;
};

// e_{j,r} = P 1_{C_r} for every cyclic class C_r of every recurrent class j.
// Throws VerificationError(IdempotentVerificationFailed) if the family is not
// an orthogonal resolution of the unit by idempotents within tol.
std::vector<RealVector> minimal_idempotents(const StochasticMatrix& s, const ReducedForm& rf,
                                            const DenseMatrix& p, double tol = kDefaultAlgTol);

PersistentAlgebra build_persistent_algebra(const StochasticMatrix& s, const ReducedForm& rf,
                                           const DenseMatrix& p, double tol = kDefaultAlgTol);

// Coordinates of x in the idempotent basis: x = sum_k c_k e_k.
RealVector idempotent_coordinates(const PersistentAlgebra& a, std::span<const double> x);

struct AlgebraReport {
  double commutativity = 0.0;
  double associativity = 0.0;
  double closure = 0.0;
  double unit = 0.0;
  double idempotent_resolution = 0.0;  // ||sum e_k - 1||
  bool passed = false;
};

AlgebraReport algebra_check(const PersistentAlgebra& a, double alg_tol = kDefaultAlgTol);

struct AutomorphismReport {
  double multiplicativity = 0.0;       // max ||S(a o b) - Sa o Sb||
  double commutation = 0.0;            // ||SP - PS||
  double range_invariance = 0.0;       // max ||P(Sa) - Sa||
  double order_residual = 0.0;         // max ||S^L a - a||
  double min_inverse_coordinate = 0.0; // of S^{L-1} e_k in idempotent coordinates
  double inverse_reconstruction = 0.0;
  std::size_t order = 0;               // smallest k >= 1 with S^k = id on range(P); 0 if none <= L
  double divisor_residual = 0.0;       // min over proper divisors L' of max ||S^{L'} a - a||
  bool order_sharp = false;            // divisor_residual > kOrderSeparation
  bool passed = false;                 // multiplicativity, invariance, S^L = id, positive inverse
};

AutomorphismReport restricted_automorphism_check(const StochasticMatrix& s,
                                                 const PersistentAlgebra& a,
                                                 double alg_tol = kDefaultAlgTol);

// True iff P(a . b) = a . b within tol for every pair of basis vectors.
bool product_coincides(const DenseMatrix& p, const std::vector<RealVector>& basis,
                       double tol = kDefaultAlgTol);

// Finest partition of the states such that every row support lies in one block.
std::vector<StateSet> multiplicative_domain(const StochasticMatrix& s,
                                            double zero_tol = kDefaultZeroTol);

struct DecoherenceReport {
  std::vector<StateSet> mult_domain_partition;
  std::size_t dim_multiplicative = 0;  // dim N
  std::size_t dim_vanishing = 0;       // dim A_o = rank(I - P)
  std::size_t combined_rank = 0;
  bool split_holds = false;
  bool product_coincides = false;
};

DecoherenceReport decoherence_split_check(const StochasticMatrix& s, const DenseMatrix& p,
                                          const std::vector<StateSet>& partition,
                                          double tol = kDefaultAlgTol);

}  // namespace persist
