#ifndef FCLT_FUNCTIONAL_HPP
#define FCLT_FUNCTIONAL_HPP

#include <memory>
#include <optional>
#include <string>

#include "path_grid.hpp"

namespace fclt {

// Weighted norm classes of test functionals, nested M0 c M1 c M2 c M.
enum class NormClass { M, M0, M1, M2 };

std::string norm_class_name(NormClass c);

// Evaluatable test functional with certified norm upper bounds. eval must be
// deterministic. Directional derivatives default to centered finite
// differences with step 1e-5 on unit-norm directions; functionals with
// analytic derivatives override.
class FunctionalSpec {
 public:
  virtual ~FunctionalSpec() = default;

  virtual double eval(const PathGrid& w) const = 0;

  // Certified upper bound on ||g|| in the given class, when available.
  virtual std::optional<double> norm_bound(NormClass) const { return std::nullopt; }

  // Certified c with ||Dg(w)|| <= c (1 + ||w||^2) for all w, when available.
  virtual std::optional<double> first_derivative_weight_bound() const { return std::nullopt; }

  virtual double directional_derivative(const PathGrid& w, const PathGrid& h) const;

  // Certified upper bound on sup_j sup_w |Dg(w)[e_k 1_{[j/l^2, ceil(j/l)/l]}]|
  // (consumed by the delta_7 term), when available.
  virtual std::optional<double> indicator_direction_bound(int k, std::size_t lambda) const {
    (void)k;
    (void)lambda;
    return std::nullopt;
  }
};

inline constexpr double kFiniteDiffStep = 1e-5;

using FunctionalPtr = std::shared_ptr<const FunctionalSpec>;

}  // namespace fclt

#endif
