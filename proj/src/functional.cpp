#include "functional.hpp"

#include <stdexcept>

namespace fclt {

std::string norm_class_name(NormClass c) {
  switch (c) {
    case NormClass::M: return "M";
    case NormClass::M0: return "M0";
    case NormClass::M1: return "M1";
    case NormClass::M2: return "M2";
  }
  return "?";
}

double FunctionalSpec::directional_derivative(const PathGrid& w, const PathGrid& h) const {
  if (w.grid_n() != h.grid_n() || w.dim() != h.dim())
    throw std::invalid_argument("directional_derivative: grid mismatch");
  PathGrid plus = w;
  plus.axpby(1.0, kFiniteDiffStep, h);
  PathGrid minus = w;
  minus.axpby(1.0, -kFiniteDiffStep, h);
  return (eval(plus) - eval(minus)) / (2.0 * kFiniteDiffStep);
}

}  // namespace fclt
