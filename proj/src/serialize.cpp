#include "annc/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace annc {

using nlohmann::json;

std::string to_json(const Network& net) {
  json layers = json::array();
  for (const auto& layer : net.layers()) {
    json rows = json::array();
    for (std::int64_t i = 0; i < layer.weights.rows(); ++i) {
      json row = json::array();
      for (std::int64_t j = 0; j < layer.weights.cols(); ++j) row.push_back(layer.weights(i, j));
      rows.push_back(std::move(row));
    }
    layers.push_back(json{{"weights", std::move(rows)}, {"bias", layer.bias}});
  }
  return json{{"layers", std::move(layers)}}.dump();
}

Network from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("network JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array() ||
      doc["layers"].empty())
    throw ParseError("network JSON: expected object with nonempty \"layers\" array");

  std::vector<AffineLayer> layers;
  std::size_t index = 0;
  for (const auto& item : doc["layers"]) {
    if (!item.is_object() || !item.contains("weights") || !item.contains("bias"))
      throw ParseError("network JSON: layer " + std::to_string(index) +
                       " needs \"weights\" and \"bias\"");
    const auto& rows = item["weights"];
    if (!rows.is_array() || rows.empty())
      throw ParseError("network JSON: layer " + std::to_string(index) + " weights must be a nonempty array of rows");
    const std::int64_t n_rows = static_cast<std::int64_t>(rows.size());
    const std::int64_t n_cols = static_cast<std::int64_t>(rows[0].size());
    if (n_cols < 1)
      throw ParseError("network JSON: layer " + std::to_string(index) + " has an empty weight row");
    Matrix w(n_rows, n_cols);
    for (std::int64_t i = 0; i < n_rows; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<std::int64_t>(row.size()) != n_cols)
        throw ParseError("network JSON: layer " + std::to_string(index) + " row " +
                         std::to_string(i) + " has length " + std::to_string(row.size()) +
                         ", expected " + std::to_string(n_cols));
      for (std::int64_t j = 0; j < n_cols; ++j) {
        const auto& cell = row[static_cast<std::size_t>(j)];
        if (!cell.is_number())
          throw ParseError("network JSON: layer " + std::to_string(index) + " entry (" +
                           std::to_string(i) + "," + std::to_string(j) + ") is not a number");
        w(i, j) = cell.get<double>();
      }
    }
    const auto& bias_json = item["bias"];
    if (!bias_json.is_array() || static_cast<std::int64_t>(bias_json.size()) != n_rows)
      throw ParseError("network JSON: layer " + std::to_string(index) + " bias length " +
                       std::to_string(bias_json.size()) + " != weight rows " +
                       std::to_string(n_rows));
    Vec bias;
    bias.reserve(static_cast<std::size_t>(n_rows));
    for (const auto& cell : bias_json) {
      if (!cell.is_number())
        throw ParseError("network JSON: layer " + std::to_string(index) + " bias entry is not a number");
      bias.push_back(cell.get<double>());
    }
    try {
      layers.emplace_back(std::move(w), std::move(bias));
    } catch (const ShapeError& e) {
      throw ParseError("network JSON: layer " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  try {
    return Network(std::move(layers));
  } catch (const ShapeError& e) {
    throw ParseError(std::string("network JSON: ") + e.what());
  }
}

void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_json(net) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Network load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace annc
