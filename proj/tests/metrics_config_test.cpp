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

#include <gtest/gtest.h>

#include <regex>
#include <sstream>
#include <stack>

#include "shrimpcnn/config.hpp"
#include "shrimpcnn/error.hpp"
#include "shrimpcnn/metrics_io.hpp"
#include "support/temp_dir.hpp"

namespace shrimpcnn {
namespace {

std::vector<EpochMetrics> fake_history(std::size_t n, bool constant = false) {
  std::vector<EpochMetrics> h;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = constant ? 0.5 : static_cast<double>(i) / static_cast<double>(n);
    h.push_back({i, 1.0 - 0.9 * t, 0.5 + 0.4 * t, 1.1 - 0.8 * t, 0.45 + 0.4 * t});
  }
  return h;
}

// Minimal well-formedness check: balanced, properly nested tags with quoted
// attributes, one root element.
bool well_formed_xml(const std::string& text, std::string& why) {
  std::stack<std::string> open;
  std::size_t roots = 0;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) {
      why = "unterminated tag";
      return false;
    }
    std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.starts_with("?")) continue;
    const std::size_t quotes = static_cast<std::size_t>(std::count(tag.begin(), tag.end(), '"'));
    if (quotes % 2 != 0) {
      why = "unbalanced quotes in <" + tag + ">";
      return false;
    }
    if (tag.starts_with("/")) {
      const std::string name = tag.substr(1);
      if (open.empty() || open.top() != name) {
        why = "mismatched </" + name + ">";
        return false;
      }
      open.pop();
      continue;
    }
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
    if (open.empty()) ++roots;
    if (!tag.ends_with("/")) open.push(name);
  }
  if (!open.empty()) {
    why = "unclosed <" + open.top() + ">";
    return false;
  }
  if (roots != 1) {
    why = std::to_string(roots) + " root elements";
    return false;
  }
  return true;
}

std::vector<std::pair<double, double>> polyline_points(const std::string& svg, const std::string& id) {
  const std::regex re("<polyline id=\"" + id + "\"[^>]*points=\"([^\"]*)\"");
  std::smatch m;
  if (!std::regex_search(svg, m, re)) return {};
  std::vector<std::pair<double, double>> pts;
  std::istringstream in(m[1].str());
  std::string pair;
  while (in >> pair) {
    const auto comma = pair.find(',');
    pts.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
  }
  return pts;
}

TEST(MetricsCsv, HeaderRowsAndFormat) {
  std::ostringstream out;
  write_metrics_csv(fake_history(30), out);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 31);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.substr(0, text.find('\n')), "epoch,train_loss,train_accuracy,val_loss,val_accuracy");
  EXPECT_NE(text.find("\n1,0.970000,0.513333,1.073333,0.463333\n"), std::string::npos) << text.substr(0, 200);
}

TEST(MetricsCsv, SingleEpochAndEmpty) {
  std::ostringstream out;
  write_metrics_csv(fake_history(1), out);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  std::ostringstream none;
  EXPECT_THROW(write_metrics_csv({}, none), ParameterError);
}

TEST(MetricsCsv, RoundTripAtSixDecimals) {
  const auto h = fake_history(7);
  std::stringstream buf;
  write_metrics_csv(h, buf);
  const auto back = read_metrics_csv(buf);
  ASSERT_EQ(back.size(), h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    EXPECT_EQ(back[i].epoch, h[i].epoch);
    EXPECT_NEAR(back[i].train_loss, h[i].train_loss, 5e-7);
    EXPECT_NEAR(back[i].val_accuracy, h[i].val_accuracy, 5e-7);
  }
  std::istringstream bad("epoch,loss\n1,2\n");
  EXPECT_THROW(read_metrics_csv(bad), ParameterError);
}

TEST(CurvesSvg, WellFormedWithOnePointPerEpoch) {
  for (std::size_t n : {1U, 2U, 30U}) {
    std::ostringstream out;
    render_curves_svg(fake_history(n), out);
    const std::string svg = out.str();
    std::string why;
    EXPECT_TRUE(well_formed_xml(svg, why)) << why;
    for (const char* id : {"train_accuracy", "train_loss", "val_accuracy", "val_loss"}) {
      EXPECT_EQ(polyline_points(svg, id).size(), n) << id;
    }
    EXPECT_NE(svg.find(">Training<"), std::string::npos);
    EXPECT_NE(svg.find(">Validation<"), std::string::npos);
    EXPECT_NE(svg.find(">epoch<"), std::string::npos);
    EXPECT_NE(svg.find(">accuracy<"), std::string::npos);
    EXPECT_NE(svg.find(">loss<"), std::string::npos);
  }
}

TEST(CurvesSvg, PanelsSideBySideAndConstantIsHorizontal) {
  std::ostringstream out;
  render_curves_svg(fake_history(12, true), out);
  const std::string svg = out.str();
  const auto train = polyline_points(svg, "train_accuracy");
  const auto val = polyline_points(svg, "val_accuracy");
  ASSERT_EQ(train.size(), 12U);
  EXPECT_LT(train.back().first, val.front().first);
  for (const auto& p : train) EXPECT_EQ(p.second, train.front().second);
  for (const char* id : {"train_loss", "val_accuracy", "val_loss"}) {
    const auto pts = polyline_points(svg, id);
    for (const auto& p : pts) EXPECT_EQ(p.second, pts.front().second) << id;
  }
  // Accuracy grows upward: later epochs of an improving run sit higher.
  std::ostringstream rising;
  render_curves_svg(fake_history(5), rising);
  const auto acc = polyline_points(rising.str(), "val_accuracy");
  EXPECT_LT(acc.back().second, acc.front().second);
}

TEST(CurvesSvg, FileOutput) {
  testing::TempDir dir("svg");
  render_curves_svg(fake_history(3), dir / "c.svg");
  write_metrics_csv(fake_history(3), dir / "m.csv");
  EXPECT_EQ(read_metrics_csv(dir / "m.csv").size(), 3U);
  EXPECT_THROW(render_curves_svg(fake_history(3), dir / "missing/dir/c.svg"), IoError);
}

TEST(RunConfig, DefaultsMatchDocumentedValues) {
  const RunConfig c;
  EXPECT_EQ(c.hyper.epochs, 30U);
  EXPECT_EQ(c.hyper.batch_size, 16U);
  EXPECT_EQ(c.hyper.optimizer.learning_rate, 1e-3);
  EXPECT_EQ(c.hyper.optimizer.alpha, 0.9);
  EXPECT_EQ(c.hyper.optimizer.epsilon, 1e-8);
  EXPECT_EQ(c.hyper.target_accuracy, 0.85);
  EXPECT_EQ(c.train_fraction, 0.8);
  EXPECT_EQ(c.min_class_count, 30U);
  EXPECT_EQ(c.model.input_size, 128U);
  EXPECT_TRUE(c.preprocessing.remove_background);
  EXPECT_EQ(c.preprocessing.tolerance, 28);
}

TEST(RunConfig, OverridesAndLayers) {
  const RunConfig c = parse_run_config(R"({
    "epochs": 12, "learning_rate": 0.0005, "seed": 99, "remove_background": false, "tolerance": 40,
    "input_size": 32,
    "layers": [{"type": "conv", "filters": 4, "kernel": 5, "padding": 2}, {"type": "relu"},
               {"type": "pool", "window": 2}, {"type": "flatten"}, {"type": "dense", "units": 2}]
  })");
  EXPECT_EQ(c.hyper.epochs, 12U);
  EXPECT_EQ(c.hyper.optimizer.learning_rate, 0.0005);
  EXPECT_EQ(c.hyper.seed, 99U);
  EXPECT_FALSE(c.preprocessing.remove_background);
  EXPECT_EQ(c.preprocessing.tolerance, 40);
  EXPECT_EQ(c.hyper.batch_size, 16U);
  ASSERT_EQ(c.model.layers.size(), 5U);
  EXPECT_EQ(std::get<ConvSpec>(c.model.layers[0]), (ConvSpec{4, 5, 1, 2}));
  EXPECT_EQ(std::get<PoolSpec>(c.model.layers[2]), (PoolSpec{2, 2}));
  EXPECT_EQ(c.model.parameter_count(), (4 * 3 * 25 + 4) + (2 * 4 * 16 * 16 + 2));
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.hyper.epochs = 3;
  c.train_fraction = 0.75;
  c.model = ModelConfig::default_config(64);
  const RunConfig back = parse_run_config(to_json(c));
  EXPECT_EQ(back.hyper.epochs, 3U);
  EXPECT_EQ(back.train_fraction, 0.75);
  EXPECT_EQ(back.model, c.model);
}

TEST(RunConfig, Errors) {
  EXPECT_THROW(parse_run_config("{\"epoch\": 3}"), ConfigError);
  EXPECT_THROW(parse_run_config("{\"epochs\": \"many\"}"), ConfigError);
  EXPECT_THROW(parse_run_config("{\"epochs\": -1}"), ConfigError);
  EXPECT_THROW(parse_run_config("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_run_config("{not json"), ConfigError);
  EXPECT_THROW(parse_run_config("{\"tolerance\": 300}"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"layers": [{"type": "lstm"}]})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"layers": [{"type": "dense"}]})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"layers": [{"type": "relu", "units": 3}]})"), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/config.json"), IoError);
}

}  // namespace
}  // namespace shrimpcnn
