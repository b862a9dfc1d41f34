#include "persist/choi_effros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "persist/errors.hpp"

namespace persist {

namespace {

RealVector project_product(const DenseMatrix& p, std::span<const double> a,
                           std::span<const double> b) {
  return p * hadamard(a, b);
}

double range_defect(const DenseMatrix& p, std::span<const double> x) {
  return sup_norm(subtract(p * x, x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void add_scaled(RealVector& acc, std::span<const double> x, double factor = 1.0) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += factor * x[i];
}

}  // namespace

std::vector<RealVector> persistent_basis(const DenseMatrix& p,
                                         std::optional<std::size_t> expected_rank) {
  auto reduction = row_reduce(p, default_rank_threshold(p));
  if (expected_rank && *expected_rank != reduction.rank) {
    std::ostringstream os;
    os << "persistent subspace has numerical rank " << reduction.rank << ", expected "
       << *expected_rank;
    throw VerificationError(ErrorKind::RankMismatch, os.str());
  }
  std::sort(reduction.pivot_columns.begin(), reduction.pivot_columns.end());
  std::vector<RealVector> basis;
  for (std::size_t j : reduction.pivot_columns) {
    RealVector v = p * p.column(j);
    const double scale = sup_norm(v);
    for (double& x : v) x /= scale;
    basis.push_back(std::move(v));
  }
  return basis;
}

RealVector ce_product(const DenseMatrix& p, std::span<const double> a,
                      std::span<const double> b, double tol) {
  for (auto x : {a, b}) {
    const double defect = range_defect(p, x);
    if (defect > tol * std::max(1.0, sup_norm(x))) {
      std::ostringstream os;
      os.precision(3);
      os << "operand is not fixed by P (defect " << defect << ")";
      throw ArgumentError(ErrorKind::NotInRange, os.str());
    }
  }
  return project_product(p, a, b);
}

double pointwise_closure_residual(const DenseMatrix& p, std::span<const double> a,
                                  std::span<const double> b) {
  const RealVector prod = hadamard(a, b);
  return sup_norm(subtract(p * prod, prod));
}

std::vector<RealVector> minimal_idempotents(const StochasticMatrix& s, const ReducedForm& rf,
                                            const DenseMatrix& p, double tol) {
  const std::size_t n = s.size();
  std::vector<RealVector> out;
  for (const auto& c : rf.classes) {
    for (const auto& cyclic : c.cyclic_classes) {
      RealVector indicator(n, 0.0);
      for (std::size_t v : cyclic) indicator[v] = 1.0;
      out.push_back(p * indicator);
    }
  }

  double worst = 0.0;
  RealVector total(n, 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    add_scaled(total, out[k]);
    worst = std::max(worst, sup_norm(subtract(project_product(p, out[k], out[k]), out[k])));
    for (std::size_t l = k + 1; l < out.size(); ++l)
      worst = std::max(worst, sup_norm(project_product(p, out[k], out[l])));
  }
  worst = std::max(worst, sup_norm(subtract(total, ones(n))));
  if (worst > tol) {
    std::ostringstream os;
    os.precision(3);
    os << "P applied to cyclic-class indicators is not an idempotent resolution of the unit"
       << " (residual " << worst << ")";
    throw VerificationError(ErrorKind::IdempotentVerificationFailed, os.str());
  }
  return out;
}

PersistentAlgebra build_persistent_algebra(const StochasticMatrix& s, const ReducedForm& rf,
                                           const DenseMatrix& p, double tol) {
  PersistentAlgebra a;
  a.basis = persistent_basis(p, rf.total_period());
  a.projection = p;
  a.lcm_period = rf.lcm_period;
  a.idempotents = minimal_idempotents(s, rf, p, tol);
  a.unit = ones(s.size());
  return a;
}

RealVector idempotent_coordinates(const PersistentAlgebra& a, std::span<const double> x) {
  RealVector c;
  c.reserve(a.idempotents.size());
  for (const auto& e : a.idempotents) {
    // x o e_k = c_k e_k for a minimal idempotent e_k.
    c.push_back(dot(project_product(a.projection, x, e), e) / dot(e, e));
  }
  return c;
}

AlgebraReport algebra_check(const PersistentAlgebra& a, double alg_tol) {
  const auto& p = a.projection;
  const auto& basis = a.basis;
  AlgebraReport r;
  std::vector<std::vector<RealVector>> table(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      table[i].push_back(project_product(p, basis[i], basis[j]));

  for (std::size_t i = 0; i < basis.size(); ++i) {
    r.unit = std::max(r.unit, sup_norm(subtract(project_product(p, a.unit, basis[i]), basis[i])));
    for (std::size_t j = 0; j < basis.size(); ++j) {
      r.commutativity = std::max(r.commutativity, sup_norm(subtract(table[i][j], table[j][i])));
      r.closure = std::max(r.closure, range_defect(p, table[i][j]));
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const RealVector left = project_product(p, table[i][j], basis[k]);
        const RealVector right = project_product(p, basis[i], table[j][k]);
        r.associativity = std::max(r.associativity, sup_norm(subtract(left, right)));
      }
    }
  }
  r.unit = std::max(r.unit, range_defect(p, a.unit));

  RealVector total(a.unit.size(), 0.0);
  for (const auto& e : a.idempotents) add_scaled(total, e);
  r.idempotent_resolution = sup_norm(subtract(total, a.unit));

  r.passed = r.commutativity <= alg_tol && r.associativity <= alg_tol && r.closure <= alg_tol &&
             r.unit <= alg_tol && r.idempotent_resolution <= alg_tol;
  return r;
}

AutomorphismReport restricted_automorphism_check(const StochasticMatrix& s,
                                                 const PersistentAlgebra& a, double alg_tol) {
  const auto& p = a.projection;
  const auto& sm = s.matrix();
  const auto& basis = a.basis;
  const std::size_t l = a.lcm_period;
  AutomorphismReport r;

  std::vector<RealVector> images;
  for (const auto& b : basis) images.push_back(sm * b);

  for (std::size_t i = 0; i < basis.size(); ++i) {
    r.range_invariance = std::max(r.range_invariance, range_defect(p, images[i]));
    for (std::size_t j = i; j < basis.size(); ++j) {
      const RealVector lhs = sm * project_product(p, basis[i], basis[j]);
      const RealVector rhs = project_product(p, images[i], images[j]);
      r.multiplicativity = std::max(r.multiplicativity, sup_norm(subtract(lhs, rhs)));
    }
  }
  r.commutation = inf_op_norm(sm * p - p * sm);

  // residual[k] = max over the basis of ||S^k a - a||, k = 0..L
  std::vector<double> residual(l + 1, 0.0);
  std::vector<RealVector> iterates = basis;
  for (std::size_t k = 1; k <= l; ++k) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      iterates[i] = sm * iterates[i];
      residual[k] = std::max(residual[k], sup_norm(subtract(iterates[i], basis[i])));
    }
  }
  r.order_residual = residual[l];
  for (std::size_t k = 1; k <= l; ++k)
    if (residual[k] <= alg_tol) {
      r.order = k;
      break;
    }
  r.divisor_residual = std::numeric_limits<double>::infinity();
  for (std::size_t d = 1; d < l; ++d)
    if (l % d == 0) r.divisor_residual = std::min(r.divisor_residual, residual[d]);
  r.order_sharp = r.divisor_residual > kOrderSeparation;

  const DenseMatrix inverse = mat_power(sm, l - 1);
  r.min_inverse_coordinate = std::numeric_limits<double>::infinity();
  for (const auto& e : a.idempotents) {
    const RealVector y = inverse * e;
    const RealVector c = idempotent_coordinates(a, y);
    RealVector rebuilt(y.size(), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      add_scaled(rebuilt, a.idempotents[k], c[k]);
      r.min_inverse_coordinate = std::min(r.min_inverse_coordinate, c[k]);
    }
    r.inverse_reconstruction = std::max(r.inverse_reconstruction, sup_norm(subtract(rebuilt, y)));
  }
  if (a.idempotents.empty()) r.min_inverse_coordinate = 0.0;

  r.passed = r.multiplicativity <= alg_tol && r.commutation <= alg_tol &&
             r.range_invariance <= alg_tol && r.order_residual <= alg_tol &&
             r.min_inverse_coordinate >= -alg_tol && r.inverse_reconstruction <= alg_tol;
  return r;
}

bool product_coincides(const DenseMatrix& p, const std::vector<RealVector>& basis, double tol) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j)
      if (pointwise_closure_residual(p, basis[i], basis[j]) > tol) return false;
  return true;
}

std::vector<StateSet> multiplicative_domain(const StochasticMatrix& s, double zero_tol) {
  const std::size_t n = s.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t anchor = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(s(i, j) > zero_tol)) continue;
      if (anchor == n) {
        anchor = j;
        continue;
      }
      const std::size_t ra = find(anchor), rb = find(j);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  std::vector<StateSet> blocks;
  std::vector<std::size_t> block_of(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t root = find(v);
    if (block_of[root] == n) {
      block_of[root] = blocks.size();
      blocks.emplace_back();
    }
    blocks[block_of[root]].push_back(v);
  }
  return blocks;
}

DecoherenceReport decoherence_split_check(const StochasticMatrix& s, const DenseMatrix& p,
                                          const std::vector<StateSet>& partition, double tol) {
  const std::size_t n = s.size();
  DecoherenceReport r;
  r.mult_domain_partition = partition;
  r.dim_multiplicative = partition.size();

  std::vector<RealVector> spanning;
  for (const auto& block : partition) {
    RealVector indicator(n, 0.0);
    for (std::size_t v : block) indicator[v] = 1.0;
    spanning.push_back(std::move(indicator));
  }
  const DenseMatrix vanishing = DenseMatrix::identity(n) - p;
  const auto reduction = row_reduce(vanishing, default_rank_threshold(vanishing));
  r.dim_vanishing = reduction.rank;
  for (std::size_t j : reduction.pivot_columns) spanning.push_back(vanishing.column(j));

  r.combined_rank = spanning.empty() ? 0 : numerical_rank(from_columns(spanning));
  r.split_holds = r.dim_multiplicative + r.dim_vanishing == n && r.combined_rank == n;
  r.product_coincides = product_coincides(p, persistent_basis(p), tol);
  return r;
}

}  // namespace persist
