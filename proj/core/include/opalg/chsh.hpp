#pragma once

// The CHSH functional |w(A (x) (B - B'))| + |w(A' (x) (B + B'))| and its
// maximization by alternating (see-saw) ascent over observables and states.

#include <array>
#include <cstdint>
#include <vector>

#include "opalg/tensor_states.hpp"

namespace opalg {

// A, A' in the left factor; B, B' in the right factor. All four must be
// self-adjoint contractions.
struct ChshObservables {
  AlgebraElement a;
  AlgebraElement a_prime;
  AlgebraElement b;
  AlgebraElement b_prime;
};

// Throws ContractViolation unless every observable is self-adjoint and has
// norm <= 1 (both within 1e-10) and lives in the right factor.
void validate_observables(const ChshObservables& obs, const TensorAlgebra& t);

// The real correlators w(A (x) (B - B')) and w(A' (x) (B + B')).
std::array<double, 2> chsh_terms(const State& state, const TensorAlgebra& t, const ChshObservables& obs);

double chsh_value(const State& state, const TensorAlgebra& t, const ChshObservables& obs);

// s1 A (x) (B - B') + s2 A' (x) (B + B').
AlgebraElement chsh_operator(const TensorAlgebra& t, const ChshObservables& obs, std::array<int, 2> signs);

struct SeesawOptions {
  int restarts = 20;
  int max_iter = 500;
  double tol = 1e-10;
};

struct ChshReport {
  ChshObservables observables;
  std::array<int, 2> signs{1, 1};
  double value = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  std::vector<double> history;
};

// Best CHSH value for a fixed state over self-adjoint contractions.
ChshReport seesaw_observables(const State& state, const TensorAlgebra& t, std::uint64_t seed,
                              const SeesawOptions& options = {});

struct GlobalChshResult {
  ChshReport report;
  State state;
};

// Alternates observable sweeps with the optimal vector state of the current
// CHSH operator.
GlobalChshResult seesaw_global(const TensorAlgebra& t, std::uint64_t seed, const SeesawOptions& options = {});

}  // namespace opalg
