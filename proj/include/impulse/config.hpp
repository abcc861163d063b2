#pragma once

#include <iosfwd>
#include <string>

#include "impulse/model.hpp"

namespace impulse {

/// Parsed model file: flat `key = value` text with keys
///   mu sigma beta k K1 K2 Q g.kind g.h g.p g.alpha
/// g.kind is piecewise_linear (alias pwl, linear) or quadratic. Q may be
/// omitted when the caller supplies it on the command line; has_q records
/// which. '#' starts a comment.
struct ModelConfig {
    ModelParams params{};
    HoldingCost cost = HoldingCost::piecewise_linear(0, 0);
    bool has_q = false;
};

ModelConfig parse_model_config(std::istream& in);

/// Throws InvalidConfig when the file is missing or malformed.
ModelConfig load_model_config(const std::string& path);

std::string format_model_config(const ModelConfig& cfg);

}  // namespace impulse
