#include "persist/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "persist/errors.hpp"

namespace persist {

namespace {

// exp(2 pi i k / d), exact at the quarter turns.
Complex root_of_unity(std::size_t k, std::size_t d) {
  if (k == 0) return {1.0, 0.0};
  if (2 * k == d) return {-1.0, 0.0};
  if (4 * k == d) return {0.0, 1.0};
  if (4 * k == 3 * d) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

double inf_op_norm(const ComplexMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.re.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.re.cols(); ++j) s += std::hypot(a.re(i, j), a.im(i, j));
    best = std::max(best, s);
  }
  return best;
}

DenseMatrix power_limit(const DenseMatrix& a, std::size_t l, double tol, int max_squarings) {
  if (!a.is_square()) throw std::invalid_argument("power_limit: matrix not square");
  if (!(tol > 0.0)) throw std::invalid_argument("power_limit: tolerance must be positive");
  DenseMatrix current = mat_power(a, l);
  for (int step = 0; step < max_squarings; ++step) {
    DenseMatrix next = current * current;
    if (inf_op_norm(next - current) <= tol) return next;
    current = std::move(next);
  }
  std::ostringstream os;
  os << "power limit did not settle after " << max_squarings << " squarings";
  throw ConvergenceError(ErrorKind::NoConvergence, os.str());
}

DenseMatrix peripheral_projection(const StochasticMatrix& s, const ReducedForm& rf,
                                  double proj_tol, int max_squarings) {
  return power_limit(s.matrix(), rf.lcm_period, proj_tol, max_squarings);
}

DenseMatrix ergodic_projection(const StochasticMatrix& s, const DenseMatrix& p, std::size_t l) {
  if (l == 0) throw std::invalid_argument("ergodic_projection: L must be positive");
  DenseMatrix term = p;
  DenseMatrix sum(p.rows(), p.cols());
  for (std::size_t m = 0; m < l; ++m) {
    sum += term;
    term = s.matrix() * term;
  }
  return (1.0 / static_cast<double>(l)) * std::move(sum);
}

DenseMatrix cesaro_mean(const DenseMatrix& a, std::size_t n) {
  if (n == 0) throw std::invalid_argument("cesaro_mean: n must be positive");
  DenseMatrix term = DenseMatrix::identity(a.rows());
  DenseMatrix sum(a.rows(), a.cols());
  for (std::size_t k = 0; k < n; ++k) {
    sum += term;
    if (k + 1 < n) term = term * a;
  }
  return (1.0 / static_cast<double>(n)) * std::move(sum);
}

std::vector<Complex> peripheral_spectrum(const ReducedForm& rf) {
  std::vector<Complex> values;
  for (const auto& c : rf.classes)
    for (std::size_t k = 0; k < c.period; ++k) values.push_back(root_of_unity(k, c.period));
  return values;
}

std::vector<Complex> distinct_peripheral_values(const ReducedForm& rf) {
  std::vector<Complex> out;
  for (const Complex& v : peripheral_spectrum(rf)) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Complex& u) { return std::abs(u - v) <= 1e-9; });
    if (!seen) out.push_back(v);
  }
  return out;
}

ComplexMatrix eigenprojection(const StochasticMatrix& s, const DenseMatrix& p,
                              const ReducedForm& rf, Complex lambda) {
  const std::size_t l = rf.lcm_period;
  Complex power{1.0, 0.0};
  for (std::size_t m = 0; m < l; ++m) power *= lambda;
  const auto predicted = peripheral_spectrum(rf);
  const bool listed = std::any_of(predicted.begin(), predicted.end(),
                                  [&](const Complex& u) { return std::abs(u - lambda) <= 1e-9; });
  if (std::abs(power - 1.0) > 1e-12 || !listed) {
    std::ostringstream os;
    os << "lambda = (" << lambda.real() << ", " << lambda.imag()
       << ") is not a predicted peripheral value (L = " << l << ")";
    throw ArgumentError(ErrorKind::NotPeripheral, os.str());
  }
  const Complex inverse = 1.0 / lambda;
  ComplexMatrix out{DenseMatrix(p.rows(), p.cols()), DenseMatrix(p.rows(), p.cols())};
  DenseMatrix term = p;
  Complex weight{1.0, 0.0};
  for (std::size_t m = 0; m < l; ++m) {
    out.re += weight.real() * term;
    out.im += weight.imag() * term;
    term = s.matrix() * term;
    weight *= inverse;
  }
  const double scale = 1.0 / static_cast<double>(l);
  out.re *= scale;
  out.im *= scale;
  return out;
}

double mass_gap_estimate(const StochasticMatrix& s, const DenseMatrix& p, int iters) {
  const std::size_t n = s.size();
  const DenseMatrix a = s.matrix() * (DenseMatrix::identity(n) - p);
  const double base = inf_op_norm(a);
  if (base == 0.0) return 1.0;
  double log_norm = std::log(base);  // log ||A^{2^m}||
  DenseMatrix scaled = (1.0 / base) * a;
  double radius = base;
  for (int m = 1; m <= iters; ++m) {
    DenseMatrix sq = scaled * scaled;
    const double nrm = inf_op_norm(sq);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
      radius = 0.0;
      break;
    }
    log_norm = 2.0 * log_norm + std::log(nrm);
    radius = std::exp(log_norm / std::ldexp(1.0, m));
    scaled = (1.0 / nrm) * std::move(sq);
  }
  const double gap = 1.0 - radius;
  return gap > 0.0 ? std::min(gap, 1.0) : std::numeric_limits<double>::min();
}

std::size_t decoherence_time(const StochasticMatrix& s, const DenseMatrix& p, double eps,
                             std::size_t t_max) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("decoherence_time: epsilon must lie in (0, 1)");
  }
  DenseMatrix residual = DenseMatrix::identity(s.size()) - p;
  for (std::size_t t = 0; t <= t_max; ++t) {
    if (inf_op_norm(residual) <= eps) return t;
    residual = s.matrix() * residual;
  }
  std::ostringstream os;
  os << "||S^t (I-P)|| stayed above " << eps << " up to t = " << t_max;
  throw ConvergenceError(ErrorKind::Timeout, os.str());
}

std::vector<double> subsequence_residuals(const StochasticMatrix& s, const DenseMatrix& p,
                                          std::size_t l, std::size_t m_max) {
  std::vector<double> out;
  DenseMatrix power = mat_power(s.matrix(), l);
  for (std::size_t m = 0; m <= m_max; ++m) {
    out.push_back(inf_op_norm(power - p));
    if (m < m_max) power = power * power;
  }
  return out;
}

std::vector<RealVector> stationary_distributions(const DenseMatrix& e1, const ReducedForm& rf) {
  std::vector<RealVector> out;
  for (const auto& c : rf.classes) {
    auto row = e1.row(c.states.front());
    out.emplace_back(row.begin(), row.end());
  }
  return out;
}

SpectralData analyze_spectrum(const StochasticMatrix& s, const ReducedForm& rf,
                              const SpectralOptions& options) {
  SpectralData d;
  d.lcm_period = rf.lcm_period;
  d.projection = peripheral_projection(s, rf, options.proj_tol, options.max_squarings);
  d.ergodic = ergodic_projection(s, d.projection, rf.lcm_period);
  d.peripheral_values = peripheral_spectrum(rf);
  d.gap_estimate = mass_gap_estimate(s, d.projection, options.gap_iters);
  d.rank_projection = numerical_rank(d.projection);
  d.rank_ergodic = numerical_rank(d.ergodic);

  const auto& p = d.projection;
  const std::size_t n = s.size();
  auto fail = [](const std::string& what, double value) {
    std::ostringstream os;
    os.precision(3);
    os << "peripheral projection check failed: " << what << " (" << value << ")";
    throw VerificationError(ErrorKind::VerificationFailed, os.str());
  };
  if (double r = inf_op_norm(p * p - p); r > options.proj_tol) fail("P^2 != P", r);
  if (double r = inf_op_norm(s.matrix() * p - p * s.matrix()); r > options.proj_tol) {
    fail("SP != PS", r);
  }
  if (double r = sup_norm(subtract(p * ones(n), ones(n))); r > options.proj_tol) {
    fail("P1 != 1", r);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (p(i, j) < -kDefaultValidationTol) fail("negative entry in P", p(i, j));
  if (d.rank_projection != rf.total_period()) {
    fail("rank P differs from the sum of periods", static_cast<double>(d.rank_projection));
  }
  if (d.rank_ergodic != rf.classes.size()) {
    fail("rank E_1 differs from the class count", static_cast<double>(d.rank_ergodic));
  }
  return d;
}

}  // namespace persist
