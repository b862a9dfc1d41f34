#include "persist/ucp_lift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "persist/choi_effros.hpp"

namespace persist {

std::size_t unit_index(std::size_t n, std::size_t k, std::size_t l) {
  if (k >= n || l >= n) throw std::out_of_range("unit_index: index out of range");
  if (k == l) return k;
  return n + k * (n - 1) + (l < k ? l : l - 1);
}

RealVector to_coordinates(const DenseMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("to_coordinates: matrix not square");
  const std::size_t n = a.rows();
  RealVector c(n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) c[unit_index(n, k, l)] = a(k, l);
  return c;
}

DenseMatrix from_coordinates(std::size_t n, std::span<const double> coords) {
  if (coords.size() != n * n) throw std::invalid_argument("from_coordinates: length mismatch");
  DenseMatrix a(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) a(k, l) = coords[unit_index(n, k, l)];
  return a;
}

Superoperator diag_pullover(const StochasticMatrix& s) {
  const std::size_t n = s.size();
  Superoperator phi{n, DenseMatrix(n * n, n * n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) phi.m(i, k) = s(i, k);
  return phi;
}

Superoperator phase_damping(double alpha, double beta) {
  Superoperator phi{2, DenseMatrix(4, 4)};
  const double angles[2] = {alpha, beta};
  for (std::size_t r = 0; r < 2; ++r) {
    // Half-angle forms, with trig values within a few ulps of 0 snapped to 0 so
    // that the quarter and half turns come out exact.
    auto snap = [](double v) { return std::abs(v) < 1e-15 ? 0.0 : v; };
    const double cos2 = snap(std::cos(2.0 * angles[r]));
    const double half_sin2 = 0.5 * snap(std::sin(2.0 * angles[r]));
    phi.m(r, 0) = 0.5 * (1.0 + cos2);
    phi.m(r, 1) = 0.5 * (1.0 - cos2);
    phi.m(r, 2) = half_sin2;
    phi.m(r, 3) = half_sin2;
  }
  return phi;
}

DenseMatrix apply(const Superoperator& phi, const DenseMatrix& a) {
  return from_coordinates(phi.n, phi.m * to_coordinates(a));
}

double unitality_residual(const Superoperator& phi) {
  const RealVector id = to_coordinates(DenseMatrix::identity(phi.n));
  return sup_norm(subtract(phi.m * id, id));
}

StochasticMatrix embedded_stochastic(const Superoperator& phi, double validation_tol) {
  return make_stochastic(phi.m.block(0, 0, phi.n, phi.n), validation_tol);
}

DenseMatrix superop_peripheral(const Superoperator& phi, const ReducedForm& rf_of_s,
                               double proj_tol, int max_squarings) {
  return power_limit(phi.m, rf_of_s.lcm_period, proj_tol, max_squarings);
}

IsoReport persistent_iso_check(const Superoperator& phi, const StochasticMatrix& s, double tol,
                               double zero_tol) {
  const std::size_t n = s.size();
  if (phi.n != n) throw std::invalid_argument("persistent_iso_check: size mismatch");
  const ReducedForm rf = canonical_form(s, zero_tol);
  const DenseMatrix ps = peripheral_projection(s, rf, tol);
  const DenseMatrix pphi = superop_peripheral(phi, rf, tol);
  const std::size_t big = n * n;

  IsoReport r;
  r.rank_lifted = numerical_rank(pphi);
  r.rank_scalar = numerical_rank(ps);
  r.projection_residual = inf_op_norm(pphi.block(0, 0, n, n) - ps);
  if (big > n) r.off_diagonal_residual = inf_op_norm(pphi.block(n, 0, big - n, big));
  r.dynamics_residual =
      inf_op_norm((phi.m * pphi).block(0, 0, n, n) - s.matrix() * ps);

  auto embed = [n](std::span<const double> diagonal) {
    DenseMatrix a(n, n);
    for (std::size_t k = 0; k < n; ++k) a(k, k) = diagonal[k];
    return a;
  };
  const auto basis = persistent_basis(ps);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const RealVector lifted_a = to_coordinates(embed(basis[i]));
    r.product_residual = std::max(r.product_residual, sup_norm(subtract(pphi * lifted_a, lifted_a)));
    for (std::size_t j = i; j < basis.size(); ++j) {
      const DenseMatrix product = embed(basis[i]) * embed(basis[j]);
      const RealVector in_lift = pphi * to_coordinates(product);
      const RealVector in_scalar = to_coordinates(embed(ps * hadamard(basis[i], basis[j])));
      r.product_residual = std::max(r.product_residual, sup_norm(subtract(in_lift, in_scalar)));
    }
  }

  r.holds = r.rank_lifted == r.rank_scalar && r.projection_residual <= tol &&
            r.off_diagonal_residual <= tol && r.dynamics_residual <= tol &&
            r.product_residual <= tol;
  return r;
}

}  // namespace persist
