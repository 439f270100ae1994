#include "dependency_model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fclt {

std::vector<std::string> validate_dependency_model(const DependencyModel& model) {
  std::vector<std::string> errors;
  if (model.n == 0) errors.push_back("n must be positive");
  if (model.p <= 0) errors.push_back("p must be positive");
  if (model.lambdas.size() != static_cast<std::size_t>(model.p))
    errors.push_back("lambda count must equal p");

  for (std::size_t j = 0; j < model.lambdas.size(); ++j) {
    if (model.lambdas[j] < 1 || model.lambdas[j] > model.n) {
      std::ostringstream os;
      os << "lambda out of range: lambda_" << (j + 1) << " = " << model.lambdas[j];
      errors.push_back(os.str());
    }
  }

  const std::size_t rows = model.rows();
  if (model.neighborhoods.size() != rows) {
    errors.push_back("neighborhood count must equal the row count");
    return errors;
  }
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& nb = model.neighborhoods[i];
    if (std::find(nb.begin(), nb.end(), i) == nb.end()) {
      std::ostringstream os;
      os << "self-loop missing: row " << (i + 1);
      errors.push_back(os.str());
    }
    for (std::size_t j : nb) {
      if (j >= rows) {
        std::ostringstream os;
        os << "neighborhood out of range: row " << (i + 1) << " references " << (j + 1);
        errors.push_back(os.str());
      }
    }
  }
  return errors;
}

void require_valid(const DependencyModel& model) {
  auto errors = validate_dependency_model(model);
  if (errors.empty()) return;
  std::ostringstream os;
  os << "invalid dependency model:";
  for (const auto& e : errors) os << " [" << e << "]";
  throw std::invalid_argument(os.str());
}

std::vector<std::vector<std::size_t>> independent_neighborhoods(std::size_t rows) {
  std::vector<std::vector<std::size_t>> nb(rows);
  for (std::size_t i = 0; i < rows; ++i) nb[i] = {i};
  return nb;
}

std::vector<std::vector<std::size_t>> banded_neighborhoods(std::size_t rows, std::size_t radius) {
  std::vector<std::vector<std::size_t>> nb(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t lo = i >= radius ? i - radius : 0;
    const std::size_t hi = std::min(rows - 1, i + radius);
    nb[i].reserve(hi - lo + 1);
    for (std::size_t j = lo; j <= hi; ++j) nb[i].push_back(j);
  }
  return nb;
}

}  // namespace fclt
