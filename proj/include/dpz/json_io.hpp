#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dpz/cylinder.hpp"
#include "dpz/dynkin_type.hpp"
#include "dpz/fibration.hpp"
#include "dpz/lattice.hpp"

namespace dpz {

using nlohmann::json;

// Rationals travel as "p/q" strings so exactness survives serialization;
// plain JSON integers are accepted as shorthand.
inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw input_error("rational values must be integers or \"p/q\" strings");
}

inline json rational_to_json(const Rational& q) { return to_string(q); }

// ---------------------------------------------------------------------------
// Surface specification files
// ---------------------------------------------------------------------------

struct SurfaceSpec {
  std::optional<FibrationData> fibration;
  std::optional<DynkinType> dynkin;
  std::vector<int> alpha_partition;
};

inline FibrationData fibration_from_json(const json& j) {
  FibrationData data;
  std::string condition = j.at("condition").get<std::string>();
  if (condition == "star")
    data.condition = Condition::Star;
  else if (condition == "starstar")
    data.condition = Condition::StarStar;
  else
    throw input_error("condition must be \"star\" or \"starstar\"");
  data.m0 = j.at("m0").get<int>();
  if (j.contains("m_inf")) data.m_inf = j.at("m_inf").get<int>();
  if (j.contains("alphas")) data.alphas = j.at("alphas").get<std::vector<int>>();
  if (j.contains("betas"))
    for (const auto& pair : j.at("betas")) {
      if (!pair.is_array() || pair.size() != 2)
        throw input_error("betas entries must be [beta, beta'] pairs");
      data.betas.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
  if (j.contains("gammas")) data.gammas = j.at("gammas").get<std::vector<int>>();
  return data;
}

inline json fibration_to_json(const FibrationData& data) {
  json j;
  j["condition"] = data.condition == Condition::Star ? "star" : "starstar";
  j["m0"] = data.m0;
  if (data.m_inf) j["m_inf"] = *data.m_inf;
  j["alphas"] = data.alphas;
  json betas = json::array();
  for (const auto& [b, bp] : data.betas) betas.push_back({b, bp});
  j["betas"] = betas;
  j["gammas"] = data.gammas;
  return j;
}

inline SurfaceSpec surface_spec_from_json(const json& j) {
  SurfaceSpec spec;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "fibration") {
    if (!j.contains("fibration") || j.contains("dynkin"))
      throw input_error("kind \"fibration\" needs exactly the \"fibration\" block");
    spec.fibration = fibration_from_json(j.at("fibration"));
  } else if (kind == "dynkin") {
    if (!j.contains("dynkin") || j.contains("fibration"))
      throw input_error("kind \"dynkin\" needs exactly the \"dynkin\" block");
    const auto& block = j.at("dynkin");
    spec.dynkin = parse_dynkin(block.at("type").get<std::string>());
    if (block.contains("alpha_partition"))
      spec.alpha_partition = block.at("alpha_partition").get<std::vector<int>>();
  } else {
    throw input_error("kind must be \"fibration\" or \"dynkin\"");
  }
  return spec;
}

struct ResolvedSurface {
  FibrationData data;
  std::optional<CaseTag> case_tag;
};

/// Turns a surface description into concrete fibration data plus, when one
/// applies, the constructor case.
inline ResolvedSurface resolve_surface(const SurfaceSpec& spec) {
  if (spec.dynkin) {
    auto [data, tag] = template_from_dynkin(*spec.dynkin, spec.alpha_partition);
    return {data, tag};
  }
  ResolvedSurface out{validate_fibration(*spec.fibration), std::nullopt};
  try {
    out.case_tag = select_case(out.data);
  } catch (const unsupported_error&) {
    // valid data without a constructor case
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ample input and certificates
// ---------------------------------------------------------------------------

inline AmpleInput ample_from_json(const json& j) {
  AmpleInput input;
  for (const auto& [label, value] : j.at("coeffs").items())
    input.coeffs[label] = rational_from_json(value);
  return input;
}

inline json ample_to_json(const AmpleInput& input) {
  json coeffs = json::object();
  for (const auto& [label, value] : input.coeffs) coeffs[label] = rational_to_json(value);
  return json{{"coeffs", coeffs}};
}

inline json certificate_to_json(const CylinderCertificate& cert) {
  json divisor = json::object();
  for (const auto& [label, value] : cert.divisor) divisor[label] = rational_to_json(value);
  json j;
  j["case"] = to_string(cert.case_tag);
  j["kind"] = cert.kind;
  j["epsilon"] = rational_to_json(cert.epsilon);
  j["divisor"] = divisor;
  j["removed_curves"] = cert.removed_curves;
  j["slope_order"] = cert.slope_order;
  j["negatives_first"] = cert.negatives_first;
  j["report"] = cert.report;
  return j;
}

inline CylinderCertificate certificate_from_json(const json& j) {
  CylinderCertificate cert;
  cert.case_tag = case_tag_from_string(j.at("case").get<std::string>());
  cert.kind = j.at("kind").get<std::string>();
  cert.epsilon = rational_from_json(j.at("epsilon"));
  for (const auto& [label, value] : j.at("divisor").items())
    cert.divisor[label] = rational_from_json(value);
  for (const auto& label : j.at("removed_curves"))
    cert.removed_curves.insert(label.get<std::string>());
  if (j.contains("slope_order")) cert.slope_order = j.at("slope_order").get<std::vector<int>>();
  if (j.contains("negatives_first"))
    cert.negatives_first = j.at("negatives_first").get<std::vector<int>>();
  if (j.contains("report")) cert.report = j.at("report").get<std::vector<std::string>>();
  return cert;
}

inline json lattice_class_to_json(const LatticeClass& c) {
  json arr = json::array();
  for (int i = 0; i < 8; ++i) arr.push_back(c[i]);
  return arr;
}

inline LatticeClass lattice_class_from_json(const json& j) {
  if (!j.is_array() || j.size() != 8)
    throw input_error("lattice classes are arrays of 8 integers (L, e1..e7)");
  LatticeClass c;
  for (int i = 0; i < 8; ++i) c[i] = j[i].get<int>();
  return c;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write file: " + path);
  out << text;
}

}  // namespace dpz
