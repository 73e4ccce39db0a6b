#pragma once

#include "sympnet/dataset.hpp"
#include "sympnet/fnn.hpp"
#include "sympnet/sympnet.hpp"

#include <string>
#include <variant>

namespace sympnet {

using Model = std::variant<SympNet, Fnn>;

inline constexpr int kModelSchemaVersion = 1;

// JSON model files; see docs/formats.md. Doubles are written in shortest
// round-trip form, so serialize/deserialize is bit-exact.
std::string serialize(const SympNet& net);
std::string serialize(const Fnn& net);
std::string serialize(const Model& model);

/// Throws ParseError naming the byte offset or the offending field path.
Model deserialize_model(const std::string& text);
SympNet deserialize_sympnet(const std::string& text);
Fnn deserialize_fnn(const std::string& text);

void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

int model_dof(const Model& model);
Eigen::Index model_parameter_count(const Model& model);
std::string model_kind(const Model& model);

/// Applies the model once to a phase point.
Vector apply_model(const Model& model, const Vector& x);
Matrix model_jacobian(const Model& model, const Vector& x);

}  // namespace sympnet
