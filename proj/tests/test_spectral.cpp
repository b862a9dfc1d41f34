#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "persist/chain_structure.hpp"
#include "persist/errors.hpp"
#include "persist/spectral.hpp"
#include "support/oracles.hpp"
#include "support/suite.hpp"

using namespace persist;
using namespace persist::testing;

namespace {

struct Analyzed {
  StochasticMatrix s;
  ReducedForm rf;
  DenseMatrix p;
};

Analyzed analyzed(const StochasticMatrix& s) {
  auto rf = canonical_form(s);
  auto p = peripheral_projection(s, rf);
  return {s, std::move(rf), std::move(p)};
}

// E_lambda[i][j] = (1/L) sum_m lambda^{-m} (S^m P)[i][j], built entrywise in complex arithmetic.
std::vector<std::vector<std::complex<double>>> complex_eigenprojection(const Analyzed& a,
                                                                      std::complex<double> lambda) {
  const std::size_t n = a.s.size();
  const std::size_t l = a.rf.lcm_period;
  std::vector<std::vector<std::complex<double>>> out(n, std::vector<std::complex<double>>(n));
  DenseMatrix term = a.p;
  for (std::size_t m = 0; m < l; ++m) {
    const std::complex<double> w = std::pow(lambda, -static_cast<double>(m)) / static_cast<double>(l);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i][j] += w * term(i, j);
    term = naive_product(a.s.matrix(), term);
  }
  return out;
}

}  // namespace

TEST_CASE("peripheral projection of the desk examples") {
  const auto f = analyzed(footnote_matrix());
  const DenseMatrix absorbed = DenseMatrix::from_rows({{0, 0, 1}, {0, 0, 1}, {0, 0, 1}});
  CHECK(max_abs_diff(f.p, absorbed) <= 1e-8);

  const auto s3 = analyzed(s3_matrix());
  CHECK(max_abs_diff(s3.p, DenseMatrix::from_rows({{0, 0.5, 0.5}, {0, 1, 0}, {0, 0, 1}})) <= 1e-12);

  const auto c4 = analyzed(cycle_matrix(4));
  CHECK(c4.p == DenseMatrix::identity(4));

  const auto two = analyzed(two_state_matrix());
  const DenseMatrix pi = DenseMatrix::from_rows({{1.0 / 3, 2.0 / 3}, {1.0 / 3, 2.0 / 3}});
  CHECK(max_abs_diff(two.p, pi) <= 1e-8);
}

TEST_CASE("projection laws across the suite") {
  for (const auto& e : full_suite()) {
    const auto a = analyzed(e.matrix);
    const auto& s = e.matrix.matrix();
    CHECK_MESSAGE(inf_op_norm(a.p * a.p - a.p) <= 1e-8, e.name);
    CHECK_MESSAGE(inf_op_norm(s * a.p - a.p * s) <= 1e-8, e.name);
    CHECK_NOTHROW(make_stochastic(a.p, 1e-9));
    CHECK_MESSAGE(numerical_rank(a.p) == a.rf.total_period(), e.name);
  }
}

TEST_CASE("power_limit failures") {
  const auto slow = make_stochastic({{1 - 1e-6, 1e-6}, {1e-6, 1 - 1e-6}});
  try {
    power_limit(slow.matrix(), 1, 1e-8, 3);
    FAIL("expected NoConvergence");
  } catch (const ConvergenceError& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
  // 64 squarings reach exponent 2^64, far beyond the mixing time.
  CHECK_NOTHROW(power_limit(slow.matrix(), 1));
  CHECK_THROWS_AS(power_limit(DenseMatrix(2, 3), 1), std::invalid_argument);
}

TEST_CASE("subsequence residuals shrink to the tolerance") {
  const auto a = analyzed(two_state_matrix());
  const auto r = subsequence_residuals(a.s, a.p, 1, 6);
  // ||S^k - P|| = (1/2)^k * 4/3 for this chain.
  for (std::size_t m = 0; m <= 6; ++m) {
    const double k = std::ldexp(1.0, static_cast<int>(m));
    CHECK(std::abs(r[m] - 4.0 / 3.0 * std::pow(0.5, k)) <= 1e-14);
  }
}

TEST_CASE("ergodic projection and stationary distributions") {
  const auto two = analyzed(two_state_matrix());
  const auto e1 = ergodic_projection(two.s, two.p, 1);
  const auto pis = stationary_distributions(e1, two.rf);
  REQUIRE(pis.size() == 1);
  CHECK(pis[0][0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(pis[0][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  const auto c3 = analyzed(cycle_matrix(3));
  const auto e1c = ergodic_projection(c3.s, c3.p, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(e1c(i, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  for (const auto& e : full_suite()) {
    const auto a = analyzed(e.matrix);
    const auto e1s = ergodic_projection(a.s, a.p, a.rf.lcm_period);
    const auto got = stationary_distributions(e1s, a.rf);
    for (std::size_t j = 0; j < a.rf.classes.size(); ++j) {
      const auto want = stationary_by_solve(e.matrix, a.rf.classes[j].states);
      for (std::size_t v = 0; v < want.size(); ++v)
        CHECK_MESSAGE(std::abs(got[j][v] - want[v]) <= 1e-7, e.name);
    }
    CHECK(numerical_rank(e1s) == a.rf.classes.size());
  }
}

TEST_CASE("cesaro_mean") {
  CHECK(cesaro_mean(DenseMatrix::identity(3), 10) == DenseMatrix::identity(3));
  const DenseMatrix swap = DenseMatrix::from_rows({{0, 1}, {1, 0}});
  const DenseMatrix half = DenseMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(max_abs_diff(cesaro_mean(swap, 2), half) == 0.0);
  CHECK_THROWS_AS(cesaro_mean(swap, 0), std::invalid_argument);
}

TEST_CASE("Cesaro mean of S^L matches the closed form of its bias") {
  // (1/N) sum_{k<N} A^k = P + (1/N) (I - A + P)^{-1} (I - A^N) (I - P) for A = S^L.
  const std::size_t n_terms = 2000;
  for (const auto& e : full_suite()) {
    const auto a = analyzed(e.matrix);
    const DenseMatrix al = mat_power(e.matrix.matrix(), a.rf.lcm_period);
    const DenseMatrix mean = cesaro_mean(al, n_terms);
    const std::size_t n = e.matrix.size();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd ea = to_eigen(al), ep = to_eigen(a.p);
    Eigen::MatrixXd an = id;
    for (std::size_t k = 0; k < n_terms; ++k) an = an * ea;
    const Eigen::MatrixXd bias = (id - ea + ep).inverse() * (id - an) * (id - ep) / double(n_terms);
    const Eigen::MatrixXd predicted = ep + bias;
    CHECK_MESSAGE((to_eigen(mean) - predicted).cwiseAbs().maxCoeff() <= 1e-8, e.name);
  }
}

TEST_CASE("peripheral_spectrum") {
  const auto rf = canonical_form(cycles_2_3());
  const auto v = peripheral_spectrum(rf);
  REQUIRE(v.size() == 5);
  CHECK(v[0] == Complex(1, 0));
  CHECK(v[1] == Complex(-1, 0));
  CHECK(v[2] == Complex(1, 0));
  CHECK(std::abs(v[3] - std::polar(1.0, 2 * std::numbers::pi / 3)) <= 1e-15);
  CHECK(distinct_peripheral_values(rf).size() == 4);

  const auto c4 = peripheral_spectrum(canonical_form(cycle_matrix(4)));
  CHECK(c4[1] == Complex(0, 1));
  CHECK(c4[3] == Complex(0, -1));

  for (const auto& e : full_suite()) {
    const auto a = analyzed(e.matrix);
    const auto pred = peripheral_spectrum(a.rf);
    CHECK(pred.size() == a.rf.total_period());
    // Every predicted value appears among the Eigen eigenvalues of S.
    const auto ev = eigenvalues(e.matrix.matrix());
    for (const auto& lambda : pred) {
      const bool found = std::any_of(ev.begin(), ev.end(),
                                     [&](const auto& mu) { return std::abs(mu - lambda) <= 1e-6; });
      CHECK_MESSAGE(found, e.name);
    }
  }
}

TEST_CASE("eigenprojection decomposes P") {
  for (const auto& e : full_suite()) {
    const auto a = analyzed(e.matrix);
    const std::size_t n = e.matrix.size();
    ComplexMatrix sum{DenseMatrix(n, n), DenseMatrix(n, n)};
    ComplexMatrix weighted{DenseMatrix(n, n), DenseMatrix(n, n)};
    for (const Complex& lambda : distinct_peripheral_values(a.rf)) {
      const auto el = eigenprojection(e.matrix, a.p, a.rf, lambda);
      const auto oracle = complex_eigenprojection(a, lambda);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          CHECK(std::abs(Complex(el.re(i, j), el.im(i, j)) - oracle[i][j]) <= 1e-12);
          sum.re(i, j) += el.re(i, j);
          sum.im(i, j) += el.im(i, j);
          const Complex w = lambda * Complex(el.re(i, j), el.im(i, j));
          weighted.re(i, j) += w.real();
          weighted.im(i, j) += w.imag();
        }
    }
    CHECK_MESSAGE(inf_op_norm(ComplexMatrix{sum.re - a.p, sum.im}) <= 1e-8, e.name);
    const DenseMatrix sp = e.matrix.matrix() * a.p;
    CHECK_MESSAGE(inf_op_norm(ComplexMatrix{weighted.re - sp, weighted.im}) <= 1e-8, e.name);
  }
}

TEST_CASE("eigenprojections of S3") {
  const auto a = analyzed(s3_matrix());
  const auto em = eigenprojection(a.s, a.p, a.rf, Complex(-1, 0));
  const DenseMatrix want = DenseMatrix::from_rows({{0, 0, 0}, {0, 0.5, -0.5}, {0, -0.5, 0.5}});
  CHECK(max_abs_diff(em.re, want) <= 1e-12);
  CHECK(max_abs_diff(em.im, DenseMatrix(3, 3)) <= 1e-12);
  // E_{-1} E_1 = 0
  const auto e1 = eigenprojection(a.s, a.p, a.rf, Complex(1, 0));
  CHECK(max_abs_diff(em.re * e1.re, DenseMatrix(3, 3)) <= 1e-12);
}

TEST_CASE("eigenprojection rejects non-peripheral values") {
  const auto a = analyzed(s3_matrix());
  for (Complex bad : {Complex(0, 1), Complex(0.5, 0), Complex(-1, 1e-6)}) {
    try {
      eigenprojection(a.s, a.p, a.rf, bad);
      FAIL("expected NotPeripheral");
    } catch (const ArgumentError& e) {
      CHECK(e.kind() == ErrorKind::NotPeripheral);
    }
  }
  // 1 is a 6th root of unity but -1 is not a value of a 3-cycle.
  const auto c3 = analyzed(cycle_matrix(3));
  CHECK_THROWS_AS(eigenprojection(c3.s, c3.p, c3.rf, Complex(-1, 0)), ArgumentError);
}

TEST_CASE("mass gap of the desk examples") {
  const auto two = analyzed(two_state_matrix());
  CHECK(mass_gap_estimate(two.s, two.p) == doctest::Approx(0.5).epsilon(1e-3));
  const auto f = analyzed(footnote_matrix());
  CHECK(mass_gap_estimate(f.s, f.p) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  const auto c3 = analyzed(cycle_matrix(3));
  CHECK(mass_gap_estimate(c3.s, c3.p) == 1.0);
  const auto s3 = analyzed(s3_matrix());
  CHECK(mass_gap_estimate(s3.s, s3.p) == 1.0);
}

TEST_CASE("mass gap agrees with the Eigen interior spectrum") {
  for (const auto& e : full_suite()) {
    const auto a = analyzed(e.matrix);
    const double gap = mass_gap_estimate(e.matrix, a.p, 30);
    const double r = interior_radius(e.matrix.matrix(), 1e-6);
    CHECK(gap > 0.0);
    CHECK(gap <= 1.0);
    // Gelfand's formula converges slowly for defective spectra; 2^30 is ample here.
    CHECK_MESSAGE(std::abs((1.0 - gap) - r) <= 1e-3, e.name);
  }
}

TEST_CASE("decoherence_time") {
  const auto two = analyzed(two_state_matrix());
  CHECK(decoherence_time(two.s, two.p, 1e-3) == 11);
  const auto s3 = analyzed(s3_matrix());
  CHECK(decoherence_time(s3.s, s3.p, 1e-3) == 1);
  const auto id = analyzed(identity_matrix(3));
  CHECK(decoherence_time(id.s, id.p, 1e-3) == 0);

  const auto slow = make_stochastic({{1 - 1e-6, 1e-6}, {1e-6, 1 - 1e-6}});
  const auto rf = canonical_form(slow);
  const auto p = peripheral_projection(slow, rf);
  try {
    decoherence_time(slow, p, 1e-3, 100);
    FAIL("expected Timeout");
  } catch (const ConvergenceError& e) {
    CHECK(e.kind() == ErrorKind::Timeout);
  }
  CHECK_THROWS_AS(decoherence_time(two.s, two.p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(decoherence_time(two.s, two.p, 1.0), std::invalid_argument);
}

TEST_CASE("analyze_spectrum bundles the checks") {
  const auto s = cycles_2_3();
  const auto d = analyze_spectrum(s, canonical_form(s));
  CHECK(d.lcm_period == 6);
  CHECK(d.rank_projection == 5);
  CHECK(d.rank_ergodic == 2);
  CHECK(d.peripheral_values.size() == 5);
  CHECK(d.gap_estimate == 1.0);
  for (const auto& e : full_suite()) CHECK_NOTHROW(analyze_spectrum(e.matrix, canonical_form(e.matrix)));
}
