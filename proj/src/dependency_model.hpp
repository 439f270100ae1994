#ifndef FCLT_DEPENDENCY_MODEL_HPP
#define FCLT_DEPENDENCY_MODEL_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fclt {

// Jump-function descriptor for one (row, coordinate) slot. The default is
// the indicator of [ (i+1)/lambda_k, 1 ] (rows are 0-based internally, so
// row i carries the paper-style index i+1). A custom descriptor supplies the
// evaluation together with its certified sup norm and its expected sup
// distance from the indicator, which is what the bound terms consume.
// Randomized jumps enter as sampler-backed closures over eval: the J's must
// be independent of the summand array, so a closure drawing from its own
// stream is the supported hook; the model catalog exercises deterministic
// descriptors only.
struct JumpSpec {
  using Eval = std::function<double(std::size_t i, int k, double t)>;

  bool indicator = true;
  Eval eval;                       // required when !indicator
  std::function<double(std::size_t, int)> sup_norm;       // ||J_{i,k}||
  std::function<double(std::size_t, int)> indicator_dev;  // E||J_{i,k} - 1_{[(i+1)/l,1]}||
};

// Dependence structure of the summand array: row count, coordinate count,
// per-coordinate horizons lambda_j and neighborhoods A_i. In the local3
// regime the array has n rows; in the proposition-weak regime it has n^2
// rows and the row-range indicators use lambda_k^2.
struct DependencyModel {
  enum class Regime { local3, proposition_weak };

  std::size_t n = 0;
  int p = 0;
  Regime regime = Regime::local3;
  std::vector<std::size_t> lambdas;                     // size p, 1 <= lambda_j <= n
  std::vector<std::vector<std::size_t>> neighborhoods;  // A_i as 0-based row sets
  std::optional<JumpSpec> jumps;                        // absent = indicator jumps

  std::size_t rows() const noexcept {
    return regime == Regime::local3 ? n : n * n;
  }
  // Row-range cap for coordinate k: lambda_k (local3) or lambda_k^2 (weak).
  std::size_t row_cap(int k) const noexcept {
    const std::size_t l = lambdas[static_cast<std::size_t>(k)];
    return regime == Regime::local3 ? l : l * l;
  }
  bool indicator_jumps() const noexcept { return !jumps || jumps->indicator; }
  double jump_sup_norm(std::size_t i, int k) const {
    return indicator_jumps() ? 1.0 : jumps->sup_norm(i, k);
  }
  double jump_indicator_dev(std::size_t i, int k) const {
    return indicator_jumps() ? 0.0 : jumps->indicator_dev(i, k);
  }
};

// Returns the empty list iff the model satisfies all structural invariants:
// i in A_i, 1 <= lambda_j <= n, neighborhoods within range.
std::vector<std::string> validate_dependency_model(const DependencyModel& model);

// Convenience: throws std::invalid_argument with the joined violation list.
void require_valid(const DependencyModel& model);

// A_i = {i} for every row.
std::vector<std::vector<std::size_t>> independent_neighborhoods(std::size_t rows);

// A_i = {i-r, .., i+r} intersected with the row range.
std::vector<std::vector<std::size_t>> banded_neighborhoods(std::size_t rows, std::size_t radius);

}  // namespace fclt

#endif
