#include <doctest.h>

#include <algorithm>

#include "persist/chain_structure.hpp"
#include "persist/errors.hpp"
#include "support/oracles.hpp"
#include "support/suite.hpp"

using namespace persist;
using namespace persist::testing;

TEST_CASE("classify_states on the desk examples") {
  const auto f = classify_states(footnote_matrix());
  CHECK(f.transient == StateSet{0, 1});
  CHECK(f.recurrent == std::vector<StateSet>{{2}});

  const auto s3 = classify_states(s3_matrix());
  CHECK(s3.transient == StateSet{0});
  CHECK(s3.recurrent == std::vector<StateSet>{{1, 2}});

  const auto c3 = classify_states(cycle_matrix(3));
  CHECK(c3.transient.empty());
  CHECK(c3.recurrent == std::vector<StateSet>{{0, 1, 2}});
}

TEST_CASE("classify_states matches the reachability oracle") {
  for (const auto& e : full_suite()) {
    const auto c = classify_states(e.matrix);
    const auto rec = recurrent_states(e.matrix);
    for (std::size_t v : c.transient) CHECK_MESSAGE(!rec[v], e.name);
    for (const auto& cls : c.recurrent)
      for (std::size_t v : cls) CHECK_MESSAGE(rec[v], e.name);
    std::size_t covered = c.transient.size();
    for (const auto& cls : c.recurrent) covered += cls.size();
    CHECK(covered == e.matrix.size());
  }
}

TEST_CASE("class_period") {
  CHECK(class_period(cycle_matrix(3), StateSet{0, 1, 2}) == 3);
  CHECK(class_period(s3_matrix(), StateSet{1, 2}) == 2);
  CHECK(class_period(footnote_matrix(), StateSet{2}) == 1);
  CHECK(class_period(two_state_matrix(), StateSet{0, 1}) == 1);
}

TEST_CASE("class_period rejects non-classes") {
  CHECK_THROWS_AS(class_period(s3_matrix(), StateSet{0, 1, 2}), ArgumentError);  // not strongly connected
  CHECK_THROWS_AS(class_period(footnote_matrix(), StateSet{1}), ArgumentError);  // not closed
  CHECK_THROWS_AS(class_period(s3_matrix(), StateSet{}), ArgumentError);
  try {
    class_period(cycles_2_3(), StateSet{0, 1, 2});
    FAIL("expected NotAClass");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAClass);
  }
}

TEST_CASE("class periods match the closed-walk oracle") {
  for (const auto& e : full_suite()) {
    const auto rf = canonical_form(e.matrix);
    std::vector<std::size_t> periods;
    for (const auto& c : rf.classes) {
      CHECK_MESSAGE(c.period == period_by_walks(e.matrix, c.states.front()), e.name);
      periods.push_back(c.period);
    }
    std::sort(periods.begin(), periods.end());
    if (e.periods) CHECK_MESSAGE(periods == *e.periods, e.name);
  }
}

TEST_CASE("cyclic_classes") {
  CHECK(cyclic_classes(s3_matrix(), StateSet{1, 2}, 2) == std::vector<StateSet>{{1}, {2}});
  CHECK(cyclic_classes(cycle_matrix(4), StateSet{0, 1, 2, 3}, 4) ==
        std::vector<StateSet>{{0}, {1}, {2}, {3}});
  CHECK(cyclic_classes(two_state_matrix(), StateSet{0, 1}, 1) == std::vector<StateSet>{{0, 1}});
}

TEST_CASE("cyclic classes advance by one step along every edge") {
  for (const auto& e : full_suite()) {
    const auto rf = canonical_form(e.matrix);
    for (const auto& c : rf.classes) {
      std::vector<std::size_t> which(e.matrix.size(), 0);
      for (std::size_t r = 0; r < c.cyclic_classes.size(); ++r)
        for (std::size_t v : c.cyclic_classes[r]) which[v] = r;
      for (std::size_t u : c.states)
        for (std::size_t v : c.states)
          if (e.matrix(u, v) > kDefaultZeroTol) {
            CHECK_MESSAGE(which[v] == (which[u] + 1) % c.period, e.name);
          }
      CHECK(std::find(c.cyclic_classes.front().begin(), c.cyclic_classes.front().end(),
                      c.states.front()) != c.cyclic_classes.front().end());
    }
  }
}

TEST_CASE("canonical_form of the footnote matrix") {
  const auto s = footnote_matrix();
  const auto rf = canonical_form(s);
  CHECK(rf.permutation == std::vector<std::size_t>{0, 1, 2});
  CHECK(rf.lcm_period == 1);
  CHECK(transient_block(s, rf) == DenseMatrix::from_rows({{0.5, 0.25}, {0.0, 2.0 / 3.0}}));
  CHECK(class_block(s, rf, 0) == DenseMatrix::from_rows({{1.0}}));
}

TEST_CASE("canonical_form of S3 and its shuffled copies") {
  const auto s = s3_matrix();
  const auto rf = canonical_form(s);
  CHECK(transient_block(s, rf) == DenseMatrix::from_rows({{0.0}}));
  CHECK(class_block(s, rf, 0) == DenseMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(rf.lcm_period == 2);

  ChainGenerator gen(1);
  for (int trial = 0; trial < 12; ++trial) {
    const auto order = gen.shuffled_order(3);
    const auto shuffled = conjugate(s, order);
    const auto rf2 = canonical_form(shuffled);
    CHECK(reduced_matrix(shuffled, rf2) == reduced_matrix(s, rf));
    CHECK(rf2.lcm_period == 2);
    CHECK(rf2.transient.size() == 1);
  }
}

TEST_CASE("reduced matrices have the block-triangular shape") {
  for (const auto& e : full_suite()) {
    const auto rf = canonical_form(e.matrix);
    const auto r = reduced_matrix(e.matrix, rf);
    const std::size_t t = rf.transient.size();
    std::vector<std::size_t> block_of(e.matrix.size(), 0);  // 0 = transient
    std::size_t pos = t;
    for (std::size_t j = 0; j < rf.classes.size(); ++j)
      for (std::size_t k = 0; k < rf.classes[j].states.size(); ++k) block_of[pos++] = j + 1;
    for (std::size_t i = t; i < r.rows(); ++i)
      for (std::size_t k = 0; k < r.cols(); ++k)
        if (block_of[i] != block_of[k]) CHECK_MESSAGE(r(i, k) <= kDefaultZeroTol, e.name);
    for (std::size_t j = 0; j < rf.classes.size(); ++j) {
      CHECK(is_irreducible(make_stochastic(class_block(e.matrix, rf, j))));
    }
    std::vector<std::size_t> seen = rf.order;
    std::sort(seen.begin(), seen.end());
    for (std::size_t k = 0; k < seen.size(); ++k) CHECK(seen[k] == k);
    for (std::size_t k = 0; k < rf.order.size(); ++k) CHECK(rf.permutation[rf.order[k]] == k);
  }
}

TEST_CASE("primitive classes are exactly those of period one") {
  for (const auto& e : full_suite()) {
    const auto rf = canonical_form(e.matrix);
    CHECK(rf.total_period() >= rf.classes.size());
    for (std::size_t j = 0; j < rf.classes.size(); ++j) {
      const std::size_t m = rf.classes[j].states.size();
      if (m > 8) continue;
      const DenseMatrix b = class_block(e.matrix, rf, j);
      bool primitive = false;
      DenseMatrix power = b;
      for (std::size_t k = 1; k <= m * m && !primitive; ++k) {
        primitive = std::all_of(power.data().begin(), power.data().end(),
                                [](double v) { return v > 0.0; });
        power = power * b;
      }
      CHECK_MESSAGE(primitive == (rf.classes[j].period == 1), e.name);
    }
  }
}

TEST_CASE("is_irreducible") {
  CHECK(is_irreducible(cycle_matrix(3)));
  CHECK_FALSE(is_irreducible(footnote_matrix()));
  CHECK_FALSE(is_irreducible(s3_matrix()));
  CHECK(is_irreducible(two_state_matrix()));
  CHECK(is_irreducible(identity_matrix(1)));
}

TEST_CASE("invariant faces by enumeration") {
  CHECK(invariant_faces_bruteforce(cycle_matrix(3)).empty());
  const auto f = invariant_faces_bruteforce(footnote_matrix());
  CHECK(std::find(f.begin(), f.end(), StateSet{0}) != f.end());
  CHECK(invariant_faces_bruteforce(two_state_matrix()).empty());
  CHECK_THROWS_AS(invariant_faces_bruteforce(identity_matrix(5), kDefaultZeroTol, 4), ArgumentError);
}

TEST_CASE("irreducibility equals absence of invariant faces") {
  for (const auto& e : full_suite()) {
    if (e.matrix.size() > 12) continue;
    CHECK_MESSAGE(is_irreducible(e.matrix) == invariant_faces_bruteforce(e.matrix).empty(), e.name);
  }
}
