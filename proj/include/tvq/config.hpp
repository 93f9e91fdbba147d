#pragma once

#include <filesystem>
#include <string>

#include "tvq/model.hpp"

namespace tvq {

/// Parses a JSON model description. Throws ConfigError on malformed input.
///
///   {
///     "lambda":   {"kind": "sinusoid", "params": {"a": 1, "b": 0.6, "c": 1, "d": 0}},
///     "staffing": {"kind": "constant", "params": {"value": 1}},
///     "mu": 1,
///     "patience": {"kind": "h2", "params": {"mean": 2, "scv": 4}},
///     "c_lambda": 1, "horizon": 16, "x0": 0, "var_x0": 0,
///     "lambda_g": {...}, "staffing_g": {...}          (optional)
///   }
///
/// Function kinds: constant{value}, linear{a,b}, sinusoid{a,b,c,d},
/// piecewise{knots, coeffs}. Patience kinds: exponential{rate},
/// h2{p, rate1, rate2} or h2{mean, scv}, tabulated{x, cdf}.
ModelSpec parse_model(const std::string& json_text);

/// Reads and parses a config file. Throws ConfigError if unreadable.
ModelSpec load_model(const std::filesystem::path& path);

/// Serializes a spec back to the same JSON schema.
std::string dump_model(const ModelSpec& spec);

}  // namespace tvq
