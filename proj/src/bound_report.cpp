#include "bound_report.hpp"

#include <stdexcept>

#include <json.hpp>

namespace fclt {

namespace {

NormClass class_from_name(const std::string& s) {
  if (s == "M") return NormClass::M;
  if (s == "M0") return NormClass::M0;
  if (s == "M1") return NormClass::M1;
  if (s == "M2") return NormClass::M2;
  throw std::invalid_argument("unknown norm class: " + s);
}

}  // namespace

double BoundReport::term_sum(bool inflate_3se) const {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.value + (inflate_3se ? 3.0 * t.se : 0.0);
  return acc;
}

double BoundReport::weighted_total(const FunctionalSpec& g, bool inflate_3se) const {
  const auto norm = g.norm_bound(norm_class);
  if (!norm.has_value())
    throw std::invalid_argument("norm bound missing: functional lacks a certified " +
                                norm_class_name(norm_class) + " bound");
  double weighted = 0.0, raw = 0.0;
  for (const auto& t : terms) {
    const double v = t.value + (inflate_3se ? 3.0 * t.se : 0.0);
    (t.norm_weighted ? weighted : raw) += v;
  }
  return *norm * weighted + raw;
}

std::string BoundReport::to_json() const {
  nlohmann::json j;
  j["regime"] = regime;
  j["norm_class"] = norm_class_name(norm_class);
  j["total"] = total;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : terms) {
    j["terms"].push_back({{"name", t.name},
                          {"paper_id", t.paper_id},
                          {"value", t.value},
                          {"se", t.se},
                          {"norm_weighted", t.norm_weighted}});
  }
  return j.dump(2);
}

BoundReport BoundReport::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  BoundReport r;
  r.regime = j.at("regime").get<std::string>();
  r.norm_class = class_from_name(j.at("norm_class").get<std::string>());
  r.total = j.at("total").get<double>();
  for (const auto& tj : j.at("terms")) {
    BoundTerm t;
    t.name = tj.at("name").get<std::string>();
    t.paper_id = tj.at("paper_id").get<std::string>();
    t.value = tj.at("value").get<double>();
    t.se = tj.at("se").get<double>();
    t.norm_weighted = tj.at("norm_weighted").get<bool>();
    r.terms.push_back(std::move(t));
  }
  return r;
}

}  // namespace fclt
