#include "harmzero/io.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace harmzero {

namespace {

using nlohmann::json;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json coeffs_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& c : p.coeffs()) out.push_back(complex_json(c));
  return out;
}

Complex complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::InvalidInput, "expected a [re, im] pair, got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Polynomial poly_from(const json& doc, const char* key, Complex fallback) {
  if (!doc.contains(key)) return Polynomial::constant(fallback);
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw Error(ErrorKind::InvalidInput, std::string(key) + " must be an array");
  std::vector<Complex> c;
  for (const auto& e : arr) c.push_back(complex_from(e));
  if (c.empty()) return Polynomial::constant(fallback);
  return Polynomial(std::move(c));
}

}  // namespace

std::string mapping_to_json(const HarmonicMapping& f) {
  json doc;
  doc["r_num"] = coeffs_json(f.r().numerator());
  doc["r_den"] = coeffs_json(f.r().denominator());
  doc["s_num"] = coeffs_json(f.s().numerator());
  doc["s_den"] = coeffs_json(f.s().denominator());
  json logs = json::array();
  for (const auto& t : f.logs()) logs.push_back({{"anchor", complex_json(t.anchor)}, {"coeff", complex_json(t.coeff)}});
  doc["logs"] = logs;
  return doc.dump(2);
}

HarmonicMapping mapping_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("mapping spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::InvalidInput, "mapping spec must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "r_num" && key != "r_den" && key != "s_num" && key != "s_den" && key != "logs") {
      throw Error(ErrorKind::InvalidInput, "unknown mapping spec field '" + key + "'");
    }
  }
  std::vector<LogTerm> logs;
  if (doc.contains("logs")) {
    if (!doc["logs"].is_array()) throw Error(ErrorKind::InvalidInput, "logs must be an array");
    for (const auto& t : doc["logs"]) {
      if (!t.is_object() || !t.contains("anchor") || !t.contains("coeff")) {
        throw Error(ErrorKind::InvalidInput, "log term needs anchor and coeff");
      }
      logs.push_back({complex_from(t["anchor"]), complex_from(t["coeff"])});
    }
  }
  RationalFunction r(poly_from(doc, "r_num", 0.0), poly_from(doc, "r_den", 1.0));
  RationalFunction s(poly_from(doc, "s_num", 0.0), poly_from(doc, "s_den", 1.0));
  return HarmonicMapping(std::move(r), std::move(s), std::move(logs));
}

HarmonicMapping load_mapping_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open mapping file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return mapping_from_json(ss.str());
}

void save_mapping_file(const HarmonicMapping& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write mapping file '" + path + "'");
  out << mapping_to_json(f) << '\n';
}

std::string report_to_json(const SolveReport& report, bool deterministic) {
  json doc;
  doc["target"] = complex_json(report.target);
  json zeros = json::array();
  for (const auto& z : report.zeros) zeros.push_back(complex_json(z));
  doc["zeros"] = zeros;
  doc["count"] = report.zeros.size();
  doc["residuals"] = report.residuals;
  doc["jacobians"] = report.jacobians;
  doc["max_residual"] = report.max_residual();
  doc["steps"] = report.steps;
  doc["refinements"] = report.refinements;
  doc["restarts"] = report.restarts;
  doc["newton_iterations"] = report.newton_iterations;
  doc["theta"] = report.theta;
  doc["seed"] = report.seed;
  doc["pole_order"] = report.pole_order;
  doc["winding_sum"] = report.winding_sum;
  doc["expected_count"] = report.expected_count;
  if (!deterministic) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    doc["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
  }
  return doc.dump(2);
}

}  // namespace harmzero
