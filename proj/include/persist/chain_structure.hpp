#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "persist/matrix.hpp"

namespace persist {

// Entries at or below this are structural zeros of the support digraph.
inline constexpr double kDefaultZeroTol = 1e-12;

using StateSet = std::vector<std::size_t>;

struct StateClassification {
  StateSet transient;                // ascending
  std::vector<StateSet> recurrent;   // each ascending, ordered by smallest member
};

struct RecurrentClass {
  StateSet states;                      // ascending
  std::size_t period = 1;               // index of imprimitivity d
  std::vector<StateSet> cyclic_classes; // C_0 .. C_{d-1}; C_0 holds the smallest state
};

// Canonical reduced form: transient block first, then one irreducible block
// per recurrent class.
struct ReducedForm {
  std::vector<std::size_t> permutation;  // new position of each state
  std::vector<std::size_t> order;        // state placed at each new position
  StateSet transient;
  std::vector<RecurrentClass> classes;
  std::size_t lcm_period = 1;            // L = lcm of the class periods

  std::size_t total_period() const;      // sum of the class periods
};

StateClassification classify_states(const StochasticMatrix& s,
                                    double zero_tol = kDefaultZeroTol);

// Throws ArgumentError(NotAClass) unless `class_states` is strongly connected
// and closed in the support digraph.
std::size_t class_period(const StochasticMatrix& s, std::span<const std::size_t> class_states,
                         double zero_tol = kDefaultZeroTol);

std::vector<StateSet> cyclic_classes(const StochasticMatrix& s,
                                     std::span<const std::size_t> class_states, std::size_t d,
                                     double zero_tol = kDefaultZeroTol);

ReducedForm canonical_form(const StochasticMatrix& s, double zero_tol = kDefaultZeroTol);

// S with rows and columns reordered by rf.order.
DenseMatrix reduced_matrix(const StochasticMatrix& s, const ReducedForm& rf);
// B_00; 0x0 when there are no transient states.
DenseMatrix transient_block(const StochasticMatrix& s, const ReducedForm& rf);
// B_jj for recurrent class j (0-based), rows/columns in canonical order.
DenseMatrix class_block(const StochasticMatrix& s, const ReducedForm& rf, std::size_t j);

bool is_irreducible(const StochasticMatrix& s, double zero_tol = kDefaultZeroTol);

inline constexpr std::size_t kDefaultMaxFaceStates = 16;

// Every proper nonempty J such that S maps span+{e_j : j in J} into itself,
// in increasing bitmask order. Throws ArgumentError(TooLarge) if n > max_n.
std::vector<StateSet> invariant_faces_bruteforce(const StochasticMatrix& s,
                                                 double zero_tol = kDefaultZeroTol,
                                                 std::size_t max_n = kDefaultMaxFaceStates);

}  // namespace persist
