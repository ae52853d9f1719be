#pragma once

// Decomposition of states on A1 (x) A2 into finite mixtures of product
// states, the partial-transpose screen, and three-way certificates.

#include <cstdint>
#include <optional>
#include <vector>

#include "opalg/chsh.hpp"

namespace opalg {

struct ProductTerm {
  double weight = 0.0;
  State left;
  State right;
};

struct Decomposition {
  std::vector<ProductTerm> terms;
  // Trace-norm distance between the target and the re-mixed terms.
  double residual = 0.0;
};

// The mixture sum_k weight_k * (left_k (x) right_k) as a state on t.product().
State remix(const Decomposition& d, const TensorAlgebra& t);

// Trace-norm distance |target - remix(d)|_1, recomputed from the terms.
double remix_residual(const Decomposition& d, const State& target, const TensorAlgebra& t);

struct PptResult {
  bool passed = true;
  double min_eigenvalue = 0.0;
};

// Partial transpose on the right factor of every weighted product block.
// Passes when the smallest eigenvalue is >= -1e-10.
PptResult ppt_check(const State& state, const TensorAlgebra& t);

struct DecompositionOptions {
  int max_terms = 200;
  double tol = 1e-6;
  int inner_restarts = 8;
  int inner_iterations = 200;
};

struct DecompositionResult {
  bool success = false;
  // On failure: the best mixture found, with its residual.
  Decomposition decomposition;
  int iterations = 0;
};

DecompositionResult decompose_product_states(const State& state, const TensorAlgebra& t, std::uint64_t seed,
                                             const DecompositionOptions& options = {});

enum class Verdict { decomposable, not_decomposable, undecided };

const char* to_string(Verdict v);

struct CertifyBudgets {
  SeesawOptions seesaw;
  DecompositionOptions decomposition;
};

struct Certificate {
  Verdict verdict = Verdict::undecided;
  PptResult ppt;
  std::optional<Decomposition> decomposition;  // decomposable
  std::optional<ChshReport> chsh;              // attached when the value exceeds 2 + 1e-8
  double best_residual = 0.0;                  // undecided: closest mixture found
};

Certificate certify_state(const State& state, const TensorAlgebra& t, std::uint64_t seed,
                          const CertifyBudgets& budgets = {});

}  // namespace opalg
