#pragma once

#include <cstddef>
#include <span>

#include "persist/chain_structure.hpp"
#include "persist/matrix.hpp"
#include "persist/spectral.hpp"

namespace persist {

// Linear map on n x n matrices in the matrix-unit basis: the diagonal units
// e_kk first (ascending k), then the off-diagonal units e_kl, k != l, in
// row-major order. M acts on coordinate columns.
struct Superoperator {
  std::size_t n = 0;
  DenseMatrix m;  // n^2 x n^2
};

// Coordinate index of the matrix unit e_kl.
std::size_t unit_index(std::size_t n, std::size_t k, std::size_t l);

RealVector to_coordinates(const DenseMatrix& a);
DenseMatrix from_coordinates(std::size_t n, std::span<const double> coords);

// Phi(a) = diag(S diag(a)), i.e. M = [[S, 0], [0, 0]].
Superoperator diag_pullover(const StochasticMatrix& s);

// The 2 x 2 map with M rows (cos^2 a, sin^2 a, sin(2a)/2, sin(2a)/2),
// (cos^2 b, sin^2 b, sin(2b)/2, sin(2b)/2) and two zero rows.
Superoperator phase_damping(double alpha, double beta);

// Apply Phi to an n x n matrix.
DenseMatrix apply(const Superoperator& phi, const DenseMatrix& a);

// ||M coords(I) - coords(I)||
double unitality_residual(const Superoperator& phi);

// The top-left n x n block of M, validated as a stochastic matrix.
StochasticMatrix embedded_stochastic(const Superoperator& phi,
                                     double validation_tol = kDefaultValidationTol);

// Peripheral projection of M by squaring from M^L, L taken from the reduced
// form of the embedded stochastic block.
DenseMatrix superop_peripheral(const Superoperator& phi, const ReducedForm& rf_of_s,
                               double proj_tol = kDefaultProjTol,
                               int max_squarings = kDefaultMaxSquarings);

struct IsoReport {
  std::size_t rank_lifted = 0;        // rank P_Phi
  std::size_t rank_scalar = 0;        // rank P_S
  double projection_residual = 0.0;   // ||P_Phi[diag, diag] - P_S||
  double off_diagonal_residual = 0.0; // size of the off-diagonal rows of P_Phi
  double dynamics_residual = 0.0;     // ||(M P_Phi)[diag, diag] - S P_S||
  double product_residual = 0.0;      // Choi-Effros products computed in M_n vs in C^n
  bool holds = false;
};

// Checks that the persistent system of Phi is the scalar one of S carried by
// the inclusion of diagonal units.
IsoReport persistent_iso_check(const Superoperator& phi, const StochasticMatrix& s,
                               double tol = kDefaultProjTol, double zero_tol = kDefaultZeroTol);

}  // namespace persist
