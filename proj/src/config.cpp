#include "tvq/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tvq/error.hpp"

namespace tvq {

using nlohmann::json;

namespace {

const json& params_of(const json& node) {
  return node.contains("params") ? node.at("params") : node;
}

SmoothFn parse_fn(const json& node, const char* what) {
  if (!node.is_object() || !node.contains("kind")) {
    throw ConfigError(std::string(what) + ": expected an object with a \"kind\" field");
  }
  const auto kind = node.at("kind").get<std::string>();
  const json& p = params_of(node);
  if (kind == "constant") return SmoothFn::constant(p.at("value").get<double>());
  if (kind == "linear") return SmoothFn::linear(p.at("a").get<double>(), p.at("b").get<double>());
  if (kind == "sinusoid") {
    return SmoothFn::sinusoid(p.at("a").get<double>(), p.at("b").get<double>(),
                              p.value("c", 1.0), p.value("d", 0.0));
  }
  if (kind == "piecewise") {
    SmoothFn::Piecewise pw{p.at("knots").get<std::vector<double>>(),
                           p.at("coeffs").get<std::vector<std::vector<double>>>()};
    try {
      return SmoothFn(std::move(pw));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(what) + ": " + e.what());
    }
  }
  throw ConfigError(std::string(what) + ": unknown function kind \"" + kind + "\"");
}

PatienceDist parse_patience(const json& node) {
  if (!node.is_object() || !node.contains("kind")) {
    throw ConfigError("patience: expected an object with a \"kind\" field");
  }
  const auto kind = node.at("kind").get<std::string>();
  const json& p = params_of(node);
  try {
    if (kind == "exponential") {
      if (p.contains("mean")) return PatienceDist::exponential(1.0 / p.at("mean").get<double>());
      return PatienceDist::exponential(p.at("rate").get<double>());
    }
    if (kind == "h2") {
      if (p.contains("scv")) return h2_from_scv(p.at("mean").get<double>(), p.at("scv").get<double>());
      return PatienceDist::hyperexp2(p.at("p").get<double>(), p.at("rate1").get<double>(),
                                     p.at("rate2").get<double>());
    }
    if (kind == "tabulated") {
      return PatienceDist::tabulated(p.at("x").get<std::vector<double>>(),
                                     p.at("cdf").get<std::vector<double>>());
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("patience: ") + e.what());
  }
  throw ConfigError("patience: unknown kind \"" + kind + "\"");
}

json fn_to_json(const SmoothFn& f) {
  json out;
  std::visit(
      [&out](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SmoothFn::Constant>) {
          out = {{"kind", "constant"}, {"params", {{"value", r.c}}}};
        } else if constexpr (std::is_same_v<T, SmoothFn::Linear>) {
          out = {{"kind", "linear"}, {"params", {{"a", r.a}, {"b", r.b}}}};
        } else if constexpr (std::is_same_v<T, SmoothFn::Sinusoid>) {
          out = {{"kind", "sinusoid"}, {"params", {{"a", r.a}, {"b", r.b}, {"c", r.c}, {"d", r.d}}}};
        } else {
          out = {{"kind", "piecewise"}, {"params", {{"knots", r.knots}, {"coeffs", r.coeffs}}}};
        }
      },
      f.repr());
  return out;
}

json patience_to_json(const PatienceDist& d) {
  json out;
  std::visit(
      [&out](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PatienceDist::Exponential>) {
          out = {{"kind", "exponential"}, {"params", {{"rate", r.rate}}}};
        } else if constexpr (std::is_same_v<T, PatienceDist::HyperExp2>) {
          out = {{"kind", "h2"}, {"params", {{"p", r.p}, {"rate1", r.rate1}, {"rate2", r.rate2}}}};
        } else {
          out = {{"kind", "tabulated"}, {"params", {{"x", r.x}, {"cdf", r.cdf}}}};
        }
      },
      d.repr());
  return out;
}

}  // namespace

ModelSpec parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    ModelSpec m;
    m.lambda = parse_fn(doc.at("lambda"), "lambda");
    m.staffing = parse_fn(doc.at("staffing"), "staffing");
    if (doc.contains("lambda_g")) m.lambda_g = parse_fn(doc.at("lambda_g"), "lambda_g");
    if (doc.contains("staffing_g")) m.staffing_g = parse_fn(doc.at("staffing_g"), "staffing_g");
    m.mu = doc.at("mu").get<double>();
    m.patience = parse_patience(doc.at("patience"));
    m.c_lambda = doc.value("c_lambda", 1.0);
    m.horizon = doc.at("horizon").get<double>();
    m.x0 = doc.value("x0", 0.0);
    m.var_x0 = doc.value("var_x0", 0.0);
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

ModelSpec load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string dump_model(const ModelSpec& spec) {
  json doc;
  doc["lambda"] = fn_to_json(spec.lambda);
  doc["staffing"] = fn_to_json(spec.staffing);
  if (spec.lambda_g) doc["lambda_g"] = fn_to_json(*spec.lambda_g);
  if (spec.staffing_g) doc["staffing_g"] = fn_to_json(*spec.staffing_g);
  doc["mu"] = spec.mu;
  doc["patience"] = patience_to_json(spec.patience);
  doc["c_lambda"] = spec.c_lambda;
  doc["horizon"] = spec.horizon;
  doc["x0"] = spec.x0;
  doc["var_x0"] = spec.var_x0;
  return doc.dump(2);
}

}  // namespace tvq
