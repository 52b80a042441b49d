#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "orlicz_ot/curves.hpp"
#include "orlicz_ot/extended.hpp"
#include "orlicz_ot/measure.hpp"
#include "orlicz_ot/metric.hpp"
#include "orlicz_ot/orlicz.hpp"
#include "orlicz_ot/young.hpp"

namespace orlicz_ot {

using nlohmann::json;

/// Extended reals in JSON: +inf is the string "inf", everything else a number.
inline json encode_real(double x) {
  if (is_inf(x)) return json("inf");
  return json(x);
}

inline double decode_real(const json& j) {
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf" || s == "Infinity") return kInf;
    if (s == "-inf") return -kInf;
    throw std::invalid_argument("expected a number or \"inf\", got \"" + s + "\"");
  }
  return j.get<double>();
}

inline std::vector<double> decode_real_vector(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(decode_real(e));
  return out;
}

inline json encode_real_vector(const std::vector<double>& v) {
  json j = json::array();
  for (double x : v) j.push_back(encode_real(x));
  return j;
}

// ---------------------------------------------------------------- Young psi

inline json to_json(const YoungFunction& psi) {
  json j;
  j["kind"] = to_string(psi.kind());
  switch (psi.kind()) {
    case YoungKind::power:
      j["p"] = psi.exponent();
      if (psi.coefficient() != 1.0) j["coeff"] = psi.coefficient();
      break;
    case YoungKind::power_exp:
      j["p"] = psi.exponent();
      break;
    case YoungKind::linear_bounded:
      j["a"] = psi.slope_low();
      j["b"] = psi.slope_high();
      break;
    case YoungKind::tabulated: {
      json pts = json::array();
      for (const auto& p : psi.breakpoints()) pts.push_back({p[0], p[1]});
      j["points"] = pts;
      if (std::isfinite(psi.r1())) j["r1"] = psi.r1();
      break;
    }
    default:
      break;
  }
  return j;
}

inline YoungFunction psi_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "power")
    return YoungFunction::power(j.at("p").get<double>(), j.value("coeff", 1.0));
  if (kind == "linf") return YoungFunction::linf();
  if (kind == "exp") return YoungFunction::exponential();
  if (kind == "power_exp") return YoungFunction::power_exp(j.at("p").get<double>());
  if (kind == "llogl") return YoungFunction::llogl();
  if (kind == "linear_bounded")
    return YoungFunction::linear_bounded(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "tabulated") {
    std::vector<std::array<double, 2>> pts;
    for (const auto& p : j.at("points")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    double r1 = j.contains("r1") ? decode_real(j.at("r1")) : kInf;
    return YoungFunction::tabulated(std::move(pts), r1);
  }
  throw std::invalid_argument("unknown Young function kind: " + kind);
}

/// Accepts inline JSON ({"kind":...}), a path to a JSON file, or the
/// shorthand forms power:p[:coeff], linf, exp, power_exp:p, llogl,
/// linear_bounded:a:b.
inline YoungFunction psi_from_spec(const std::string& spec) {
  auto trimmed = spec;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
    trimmed.erase(trimmed.begin());
  if (!trimmed.empty() && trimmed.front() == '{') return psi_from_json(json::parse(trimmed));

  std::vector<std::string> parts;
  std::stringstream ss(trimmed);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (!parts.empty()) {
    const std::string& head = parts[0];
    try {
      if (head == "power" && parts.size() >= 2)
        return YoungFunction::power(std::stod(parts[1]),
                                    parts.size() >= 3 ? std::stod(parts[2]) : 1.0);
      if (head == "linf" && parts.size() == 1) return YoungFunction::linf();
      if (head == "exp" && parts.size() == 1) return YoungFunction::exponential();
      if (head == "power_exp" && parts.size() == 2)
        return YoungFunction::power_exp(std::stod(parts[1]));
      if (head == "llogl" && parts.size() == 1) return YoungFunction::llogl();
      if (head == "linear_bounded" && parts.size() == 3)
        return YoungFunction::linear_bounded(std::stod(parts[1]), std::stod(parts[2]));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("malformed psi shorthand: " + spec);
    }
  }

  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("psi spec is neither shorthand, inline JSON, nor a readable file: " + spec);
  json j;
  in >> j;
  return psi_from_json(j);
}

// ------------------------------------------------------------------ metric

inline json to_json(const ExtendedMetric& m) {
  json j;
  if (m.has_oracle()) {
    json pts = json::array();
    for (const auto& p : m.coords()) pts.push_back(p);
    j["points"] = pts;
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
      json row = json::array();
      for (std::size_t jj = 0; jj < m.size(); ++jj) row.push_back(encode_real(m.dist(i, jj)));
      rows.push_back(row);
    }
    j["dist"] = rows;
  }
  if (!m.labels().empty()) j["labels"] = m.labels();
  return j;
}

inline ExtendedMetric metric_from_json(const json& j) {
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  ExtendedMetric m = [&] {
    if (j.contains("points")) {
      std::vector<std::vector<double>> pts;
      for (const auto& p : j.at("points")) pts.push_back(p.get<std::vector<double>>());
      return ExtendedMetric::from_point_cloud(std::move(pts), std::move(labels));
    }
    if (j.contains("dist")) {
      std::vector<std::vector<double>> rows;
      for (const auto& r : j.at("dist")) rows.push_back(decode_real_vector(r));
      return ExtendedMetric::from_matrix(rows, std::move(labels));
    }
    throw std::invalid_argument("metric JSON needs either \"points\" or \"dist\"");
  }();
  if (j.contains("blocked")) {
    std::vector<std::pair<std::size_t, std::size_t>> blocked;
    for (const auto& p : j.at("blocked"))
      blocked.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
    m = m.with_blocked_pairs(blocked);
  }
  return m;
}

// ---------------------------------------------------------------- measures

inline json to_json(const DiscreteMeasure& mu) {
  return json{{"support", mu.support()}, {"weights", mu.weights()}};
}

inline DiscreteMeasure measure_from_json(const json& j) {
  return DiscreteMeasure::create(j.at("support").get<std::vector<std::size_t>>(),
                                 j.at("weights").get<std::vector<double>>());
}

inline json to_json(const WeightedSamples& u) {
  return json{{"values", encode_real_vector(u.values)}, {"weights", u.weights}};
}

inline WeightedSamples samples_from_json(const json& j) {
  return WeightedSamples(decode_real_vector(j.at("values")),
                         j.at("weights").get<std::vector<double>>());
}

inline json to_json(const Coupling& g) {
  json rows = json::array();
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    json row = json::array();
    for (std::size_t jj = 0; jj < g.cols.size(); ++jj) row.push_back(g.at(i, jj));
    rows.push_back(row);
  }
  return json{{"rows", g.rows}, {"cols", g.cols}, {"w", rows}};
}

inline Coupling coupling_from_json(const json& j) {
  std::vector<std::size_t> rows = j.at("rows").get<std::vector<std::size_t>>();
  std::vector<std::size_t> cols = j.at("cols").get<std::vector<std::size_t>>();
  std::vector<double> w;
  for (const auto& r : j.at("w"))
    for (const auto& x : r) w.push_back(x.get<double>());
  return Coupling(std::move(rows), std::move(cols), std::move(w));
}

// ------------------------------------------------------------------ curves

inline json to_json(const MeasureCurve& c) {
  json ms = json::array();
  for (const auto& m : c.measures) ms.push_back(to_json(m));
  return json{{"times", c.times}, {"measures", ms}};
}

inline MeasureCurve curve_from_json(const json& j) {
  std::vector<DiscreteMeasure> ms;
  for (const auto& m : j.at("measures")) ms.push_back(measure_from_json(m));
  return MeasureCurve(j.at("times").get<std::vector<double>>(), std::move(ms));
}

inline json to_json(const PathMeasure& eta) {
  json paths = json::array();
  for (const auto& p : eta.paths)
    paths.push_back(json{{"nodes", p.nodes}, {"weight", p.weight}});
  return json{{"grid", eta.grid}, {"paths", paths}};
}

inline PathMeasure path_measure_from_json(const json& j) {
  std::vector<PathMeasure::Path> paths;
  for (const auto& p : j.at("paths"))
    paths.push_back({p.at("nodes").get<std::vector<std::size_t>>(), p.at("weight").get<double>()});
  return PathMeasure(j.at("grid").get<std::vector<double>>(), std::move(paths));
}

// ------------------------------------------------------------------- dump

namespace detail {

inline void dump_17g(const json& j, std::string& out, int indent, int depth) {
  auto pad = [&](int d) { out.append(static_cast<std::size_t>(indent * d), ' '); };
  switch (j.type()) {
    case json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {  // keep the output parseable: quote like encode_real
        out += std::isnan(v) ? "null" : (v > 0 ? "\"inf\"" : "\"-inf\"");
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out += buf;
      break;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      bool flat = true;  // arrays of scalars stay on one line
      for (const auto& e : j)
        if (e.is_structured()) flat = false;
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) {
          out += '\n';
          pad(depth + 1);
        }
        dump_17g(e, out, indent, depth + 1);
        first = false;
      }
      if (!flat) {
        out += '\n';
        pad(depth);
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        out += '\n';
        pad(depth + 1);
        out += json(it.key()).dump();
        out += ": ";
        dump_17g(it.value(), out, indent, depth + 1);
        first = false;
      }
      out += '\n';
      pad(depth);
      out += '}';
      break;
    }
    default:
      out += j.dump();  // strings, integers, booleans, null
  }
}

}  // namespace detail

/// Deterministic pretty-printer: floating-point numbers rendered with 17
/// significant digits (lossless round-trip), object keys in sorted order.
inline std::string dump_json(const json& j, int indent = 2) {
  std::string out;
  detail::dump_17g(j, out, indent, 0);
  out += '\n';
  return out;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("parse error in " + path + ": " + e.what());
  }
}

}  // namespace orlicz_ot
