#include "sympnet/model_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace sympnet {

using json = nlohmann::ordered_json;

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError("model " + path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

int int_field(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::string string_field(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Vector json_to_vector(const json& v, Eigen::Index size, const std::string& path) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != size) {
    fail(path, "expected an array of " + std::to_string(size) + " numbers");
  }
  Vector out(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    out[i] = number(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

Matrix json_to_matrix(const json& v, Eigen::Index rows, Eigen::Index cols, const std::string& path) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
    fail(path, "expected " + std::to_string(rows) + " rows");
  }
  Matrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    out.row(r) = json_to_vector(v[static_cast<std::size_t>(r)], cols,
                                path + "[" + std::to_string(r) + "]")
                     .transpose();
  }
  return out;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("model: malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void check_header(const json& doc, const std::string& kind) {
  const int version = int_field(doc, "schema_version", "");
  if (version != kModelSchemaVersion) {
    fail(".schema_version", "unsupported version " + std::to_string(version));
  }
  const std::string found = string_field(doc, "kind", "");
  if (found != kind) fail(".kind", "expected '" + kind + "', found '" + found + "'");
}

SympNet sympnet_from_json(const json& doc) {
  check_header(doc, "sympnet");
  SympNetShape shape;
  shape.d = int_field(doc, "d", "");
  shape.k = int_field(doc, "k", "");
  shape.n = int_field(doc, "n", "");
  if (shape.d < 1 || shape.k < 0 || shape.n < 1) fail("", "d >= 1, k >= 0, n >= 1 required");
  try {
    shape.activation = activation_from_string(string_field(doc, "activation", ""));
  } catch (const std::invalid_argument& e) {
    fail(".activation", e.what());
  }
  if (doc.contains("trainable_gate_scale")) {
    const json& t = doc["trainable_gate_scale"];
    if (!t.is_boolean()) fail(".trainable_gate_scale", "expected a boolean");
    shape.trainable_gate_scale = t.get<bool>();
  }
  const double h = number(field(doc, "h", ""), ".h");

  SympNet net(shape, h);
  const json& units = field(doc, "units", "");
  const std::size_t expected = 2 * static_cast<std::size_t>(shape.k) + 1;
  if (!units.is_array() || units.size() != expected) {
    fail(".units", "expected " + std::to_string(expected) + " units");
  }
  const int d = shape.d;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const std::string path = ".units[" + std::to_string(i) + "]";
    const json& unit = units[i];
    const std::string type = string_field(unit, "type", path);
    if (i % 2 == 0) {
      if (type != "linear") fail(path, "expected a linear unit");
      LinearUnit& lin = net.linear_units()[i / 2];
      const json& subs = field(unit, "sublayers", path);
      if (!subs.is_array() || static_cast<int>(subs.size()) != shape.n) {
        fail(path + ".sublayers", "expected " + std::to_string(shape.n) + " sublayers");
      }
      for (std::size_t s = 0; s < subs.size(); ++s) {
        const std::string sp = path + ".sublayers[" + std::to_string(s) + "]";
        const std::string side = string_field(subs[s], "side", sp);
        if (side != to_string(lin.sublayers[s].side)) {
          fail(sp + ".side", "expected '" + to_string(lin.sublayers[s].side) + "'");
        }
        lin.sublayers[s].a_raw = json_to_matrix(field(subs[s], "a", sp), d, d, sp + ".a");
      }
      lin.bias = json_to_vector(field(unit, "bias", path), 2 * d, path + ".bias");
    } else {
      if (type != "gate") fail(path, "expected a gate unit");
      GateUnit& gate = net.gates()[i / 2];
      const std::string side = string_field(unit, "side", path);
      if (side != to_string(gate.side)) fail(path + ".side", "expected '" + to_string(gate.side) + "'");
      if (shape.trainable_gate_scale) gate.scale = number(field(unit, "scale", path), path + ".scale");
    }
  }
  return net;
}

Fnn fnn_from_json(const json& doc) {
  check_header(doc, "fnn");
  const json& sizes_json = field(doc, "sizes", "");
  if (!sizes_json.is_array() || sizes_json.size() < 2) fail(".sizes", "expected at least two sizes");
  std::vector<int> sizes;
  for (std::size_t i = 0; i < sizes_json.size(); ++i) {
    if (!sizes_json[i].is_number_integer() || sizes_json[i].get<int>() < 1) {
      fail(".sizes[" + std::to_string(i) + "]", "expected a positive integer");
    }
    sizes.push_back(sizes_json[i].get<int>());
  }
  const json& layers = field(doc, "layers", "");
  if (!layers.is_array() || layers.size() + 1 != sizes.size()) {
    fail(".layers", "expected " + std::to_string(sizes.size() - 1) + " layers");
  }
  std::vector<DenseLayer> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string path = ".layers[" + std::to_string(i) + "]";
    const std::string act = string_field(layers[i], "activation", path);
    DenseLayer layer;
    if (act == "sigmoid") {
      layer.activation = DenseActivation::Sigmoid;
    } else if (act == "identity") {
      layer.activation = DenseActivation::Identity;
    } else {
      fail(path + ".activation", "expected sigmoid or identity");
    }
    layer.weights = json_to_matrix(field(layers[i], "weights", path), sizes[i + 1], sizes[i],
                                   path + ".weights");
    layer.bias = json_to_vector(field(layers[i], "bias", path), sizes[i + 1], path + ".bias");
    out.push_back(std::move(layer));
  }
  return Fnn(std::move(out));
}

}  // namespace

std::string serialize(const SympNet& net) {
  const auto& shape = net.shape();
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["kind"] = "sympnet";
  doc["d"] = shape.d;
  doc["h"] = net.step();
  doc["k"] = shape.k;
  doc["n"] = shape.n;
  doc["activation"] = to_string(shape.activation);
  doc["trainable_gate_scale"] = shape.trainable_gate_scale;
  json units = json::array();
  const auto& linear = net.linear_units();
  for (std::size_t u = 0; u < linear.size(); ++u) {
    if (u > 0) {
      const GateUnit& g = net.gates()[u - 1];
      json gate{{"type", "gate"}, {"side", to_string(g.side)}};
      if (shape.trainable_gate_scale) gate["scale"] = g.scale;
      units.push_back(std::move(gate));
    }
    json subs = json::array();
    for (const auto& s : linear[u].sublayers) {
      subs.push_back({{"side", to_string(s.side)}, {"a", matrix_to_json(s.a_raw)}});
    }
    units.push_back({{"type", "linear"}, {"sublayers", std::move(subs)},
                     {"bias", vector_to_json(linear[u].bias)}});
  }
  doc["units"] = std::move(units);
  return doc.dump(1) + "\n";
}

std::string serialize(const Fnn& net) {
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["kind"] = "fnn";
  doc["sizes"] = net.sizes();
  json layers = json::array();
  for (const auto& l : net.layers()) {
    layers.push_back({{"activation", l.activation == DenseActivation::Sigmoid ? "sigmoid" : "identity"},
                      {"weights", matrix_to_json(l.weights)},
                      {"bias", vector_to_json(l.bias)}});
  }
  doc["layers"] = std::move(layers);
  return doc.dump(1) + "\n";
}

std::string serialize(const Model& model) {
  return std::visit([](const auto& m) { return serialize(m); }, model);
}

Model deserialize_model(const std::string& text) {
  const json doc = parse_json(text);
  const std::string kind = string_field(doc, "kind", "");
  if (kind == "sympnet") return sympnet_from_json(doc);
  if (kind == "fnn") return fnn_from_json(doc);
  fail(".kind", "unknown model kind '" + kind + "'");
}

SympNet deserialize_sympnet(const std::string& text) { return sympnet_from_json(parse_json(text)); }

Fnn deserialize_fnn(const std::string& text) { return fnn_from_json(parse_json(text)); }

void save_model(const std::string& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << serialize(model);
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

int model_dof(const Model& model) {
  return std::visit(
      [](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, SympNet>) {
          return m.dof();
        } else {
          return m.input_dim() / 2;
        }
      },
      model);
}

Eigen::Index model_parameter_count(const Model& model) {
  return std::visit([](const auto& m) { return m.parameter_count(); }, model);
}

std::string model_kind(const Model& model) {
  return std::holds_alternative<SympNet>(model) ? "sympnet" : "fnn";
}

Vector apply_model(const Model& model, const Vector& x) {
  if (const auto* net = std::get_if<SympNet>(&model)) return forward(*net, x);
  return fnn_forward(std::get<Fnn>(model), x);
}

Matrix model_jacobian(const Model& model, const Vector& x) {
  if (const auto* net = std::get_if<SympNet>(&model)) return jacobian(*net, x);
  return fnn_jacobian(std::get<Fnn>(model), x);
}

}  // namespace sympnet
