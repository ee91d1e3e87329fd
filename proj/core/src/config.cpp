// Copyright 2026 The shrimpcnn Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shrimpcnn/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "overloaded.hpp"
#include "shrimpcnn/error.hpp"

namespace shrimpcnn {

using nlohmann::json;

namespace {

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key `" + key + "`: " + e.what());
  }
}

std::size_t get_count(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("config key `" + key + "` must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key `" + key + "` in " + where);
  }
}

LayerSpec parse_layer(const json& j, std::size_t index) {
  const std::string where = "layers[" + std::to_string(index) + "]";
  if (!j.is_object() || !j.contains("type")) throw ConfigError(where + " must be an object with a `type`");
  const auto type = get_as<std::string>(j, "type");
  if (type == "conv") {
    reject_unknown(j, {"type", "filters", "kernel", "stride", "padding"}, where);
    ConvSpec c;
    if (j.contains("filters")) c.out_channels = get_count(j, "filters");
    if (j.contains("kernel")) c.kernel = get_count(j, "kernel");
    if (j.contains("stride")) c.stride = get_count(j, "stride");
    if (j.contains("padding")) c.padding = get_count(j, "padding");
    return c;
  }
  if (type == "pool") {
    reject_unknown(j, {"type", "window", "stride"}, where);
    PoolSpec p;
    if (j.contains("window")) p.window = get_count(j, "window");
    if (j.contains("stride")) p.stride = get_count(j, "stride");
    return p;
  }
  if (type == "relu") {
    reject_unknown(j, {"type"}, where);
    return ReluSpec{};
  }
  if (type == "flatten") {
    reject_unknown(j, {"type"}, where);
    return FlattenSpec{};
  }
  if (type == "dense") {
    reject_unknown(j, {"type", "units"}, where);
    if (!j.contains("units")) throw ConfigError(where + ": dense layer needs `units`");
    return DenseSpec{get_count(j, "units")};
  }
  throw ConfigError(where + ": unknown layer type `" + type + "`");
}

json layer_to_json(const LayerSpec& spec) {
  return std::visit(detail::Overloaded{
                        [](const ConvSpec& c) {
                          return json{{"type", "conv"}, {"filters", c.out_channels}, {"kernel", c.kernel},
                                      {"stride", c.stride}, {"padding", c.padding}};
                        },
                        [](const PoolSpec& p) { return json{{"type", "pool"}, {"window", p.window}, {"stride", p.stride}}; },
                        [](const ReluSpec&) { return json{{"type", "relu"}}; },
                        [](const FlattenSpec&) { return json{{"type", "flatten"}}; },
                        [](const DenseSpec& d) { return json{{"type", "dense"}, {"units", d.units}}; },
                    },
                    spec);
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, RunConfig base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"epochs", "batch_size", "learning_rate", "alpha", "epsilon", "seed", "target_accuracy", "threads",
                  "train_fraction", "min_class_count", "input_size", "remove_background", "tolerance", "layers"},
                 "config");

  RunConfig c = std::move(base);
  if (j.contains("epochs")) c.hyper.epochs = get_count(j, "epochs");
  if (j.contains("batch_size")) c.hyper.batch_size = get_count(j, "batch_size");
  if (j.contains("learning_rate")) c.hyper.optimizer.learning_rate = get_as<double>(j, "learning_rate");
  if (j.contains("alpha")) c.hyper.optimizer.alpha = get_as<double>(j, "alpha");
  if (j.contains("epsilon")) c.hyper.optimizer.epsilon = get_as<double>(j, "epsilon");
  if (j.contains("seed")) c.hyper.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("target_accuracy")) c.hyper.target_accuracy = get_as<double>(j, "target_accuracy");
  if (j.contains("threads")) c.hyper.threads = get_count(j, "threads");
  if (j.contains("train_fraction")) c.train_fraction = get_as<double>(j, "train_fraction");
  if (j.contains("min_class_count")) c.min_class_count = get_count(j, "min_class_count");
  if (j.contains("input_size")) c.model.input_size = get_count(j, "input_size");
  if (j.contains("remove_background")) c.preprocessing.remove_background = get_as<bool>(j, "remove_background");
  if (j.contains("tolerance")) {
    const std::size_t t = get_count(j, "tolerance");
    if (t > 255) throw ConfigError("config key `tolerance` must lie in [0, 255]");
    c.preprocessing.tolerance = static_cast<int>(t);
  }
  if (j.contains("layers")) {
    const json& layers = j.at("layers");
    if (!layers.is_array()) throw ConfigError("config key `layers` must be an array");
    c.model.layers.clear();
    for (std::size_t i = 0; i < layers.size(); ++i) c.model.layers.push_back(parse_layer(layers[i], i));
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), std::move(base));
}

std::string to_json(const RunConfig& c) {
  json layers = json::array();
  for (const auto& l : c.model.layers) layers.push_back(layer_to_json(l));
  const json j = {
      {"epochs", c.hyper.epochs},
      {"batch_size", c.hyper.batch_size},
      {"learning_rate", c.hyper.optimizer.learning_rate},
      {"alpha", c.hyper.optimizer.alpha},
      {"epsilon", c.hyper.optimizer.epsilon},
      {"seed", c.hyper.seed},
      {"target_accuracy", c.hyper.target_accuracy},
      {"threads", c.hyper.threads},
      {"train_fraction", c.train_fraction},
      {"min_class_count", c.min_class_count},
      {"input_size", c.model.input_size},
      {"remove_background", c.preprocessing.remove_background},
      {"tolerance", c.preprocessing.tolerance},
      {"layers", layers},
  };
  return j.dump(2);
}

}  // namespace shrimpcnn
