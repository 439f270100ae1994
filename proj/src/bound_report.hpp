#ifndef FCLT_BOUND_REPORT_HPP
#define FCLT_BOUND_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "functional.hpp"

namespace fclt {

struct BoundTerm {
  std::string name;      // human label
  std::string paper_id;  // eps1..eps7, delta1..delta7, or a named constant
  double value = 0.0;
  double se = 0.0;          // 0 for closed forms
  bool norm_weighted = true;  // false only for delta7, which enters raw
};

// Itemized rate bound. `total` is the plain term sum (unit norm); the
// norm-weighted totals are computed against a functional's certified bound
// in the regime's class.
struct BoundReport {
  std::string regime;  // local3 | local3-independent | proposition-weak | iid-local1 | ustat
  NormClass norm_class = NormClass::M1;
  std::vector<BoundTerm> terms;
  double total = 0.0;

  double term_sum(bool inflate_3se) const;

  // Applies the norm weight from g (throws "norm bound missing" without a
  // certified bound in the regime's class); unweighted terms enter as-is.
  double weighted_total(const FunctionalSpec& g, bool inflate_3se) const;

  std::string to_json() const;
  static BoundReport from_json(const std::string& text);
};

}  // namespace fclt

#endif
