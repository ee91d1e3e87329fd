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

#include "shrimpcnn/metrics_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "shrimpcnn/error.hpp"

namespace shrimpcnn {

namespace {

constexpr const char* kCsvHeader = "epoch,train_loss,train_accuracy,val_loss,val_accuracy";

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void require_history(std::span<const EpochMetrics> history) {
  if (history.empty()) throw ParameterError("metric history is empty");
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_metrics_csv(std::span<const EpochMetrics> history, std::ostream& out) {
  require_history(history);
  out << kCsvHeader << '\n';
  for (const auto& m : history) {
    out << m.epoch << ',' << fmt("%.6f", m.train_loss) << ',' << fmt("%.6f", m.train_accuracy) << ','
        << fmt("%.6f", m.val_loss) << ',' << fmt("%.6f", m.val_accuracy) << '\n';
  }
}

void write_metrics_csv(std::span<const EpochMetrics> history, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_metrics_csv(history, out);
  if (!out) throw IoError("error writing " + path.string());
}

std::vector<EpochMetrics> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("metrics CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ParameterError("unexpected metrics CSV header: " + line);
  std::vector<EpochMetrics> history;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    EpochMetrics m;
    if (!(fields >> m.epoch >> m.train_loss >> m.train_accuracy >> m.val_loss >> m.val_accuracy)) {
      throw ParameterError("metrics CSV line " + std::to_string(line_no) + " is malformed");
    }
    history.push_back(m);
  }
  require_history(history);
  return history;
}

std::vector<EpochMetrics> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metrics CSV " + path.string());
  return read_metrics_csv(in);
}

void render_curves_svg(std::span<const EpochMetrics> history, std::ostream& out) {
  require_history(history);
  constexpr double kWidth = 1000, kHeight = 430;
  constexpr double kPlotW = 360, kPlotH = 300, kTop = 60;
  constexpr double kPanelLeft[2] = {70, 570};

  double loss_max = 0.0;
  for (const auto& m : history) loss_max = std::max({loss_max, m.train_loss, m.val_loss});
  loss_max = loss_max > 0.0 ? loss_max * 1.1 : 1.0;

  const std::size_t n = history.size();
  auto x_at = [&](double left, std::size_t i) {
    return n == 1 ? left + kPlotW / 2 : left + kPlotW * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  auto y_at = [&](double v, double vmax) { return kTop + kPlotH * (1.0 - std::clamp(v / vmax, 0.0, 1.0)); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  const char* titles[2] = {"Training", "Validation"};
  for (int panel = 0; panel < 2; ++panel) {
    const double left = kPanelLeft[panel];
    out << "  <g id=\"" << (panel == 0 ? "train" : "validation") << "-panel\">\n";
    out << "    <text x=\"" << left + kPlotW / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">"
        << titles[panel] << "</text>\n";
    out << "    <rect x=\"" << left << "\" y=\"" << kTop << "\" width=\"" << kPlotW << "\" height=\"" << kPlotH
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (int t = 0; t <= 4; ++t) {
      const double frac = t / 4.0;
      const double y = kTop + kPlotH * (1.0 - frac);
      out << "    <line x1=\"" << left << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\"" << left + kPlotW << "\" y2=\""
          << fmt("%.2f", y) << "\" stroke=\"#ddd\"/>\n";
      out << "    <text x=\"" << left - 6 << "\" y=\"" << fmt("%.2f", y + 4) << "\" text-anchor=\"end\">"
          << fmt("%.2f", frac) << "</text>\n";
      out << "    <text x=\"" << left + kPlotW + 6 << "\" y=\"" << fmt("%.2f", y + 4) << "\">"
          << fmt("%.3f", frac * loss_max) << "</text>\n";
    }
    const std::size_t step = std::max<std::size_t>(1, n / 10);
    for (std::size_t i = 0; i < n; i += step) {
      out << "    <text x=\"" << fmt("%.2f", x_at(left, i)) << "\" y=\"" << kTop + kPlotH + 16
          << "\" text-anchor=\"middle\">" << history[i].epoch << "</text>\n";
    }
    out << "    <text x=\"" << left + kPlotW / 2 << "\" y=\"" << kTop + kPlotH + 36
        << "\" text-anchor=\"middle\">epoch</text>\n";
    out << "    <text x=\"" << left - 45 << "\" y=\"" << kTop + kPlotH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
        << left - 45 << ' ' << kTop + kPlotH / 2 << ")\">accuracy</text>\n";
    out << "    <text x=\"" << left + kPlotW + 52 << "\" y=\"" << kTop + kPlotH / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(90 " << left + kPlotW + 52 << ' ' << kTop + kPlotH / 2
        << ")\">loss</text>\n";

    auto polyline = [&](const char* id, const char* colour, auto value, double vmax) {
      out << "    <polyline id=\"" << id << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        if (i) out << ' ';
        out << fmt("%.2f", x_at(left, i)) << ',' << fmt("%.2f", y_at(value(history[i]), vmax));
      }
      out << "\"/>\n";
    };
    if (panel == 0) {
      polyline("train_accuracy", "#1f77b4", [](const EpochMetrics& m) { return m.train_accuracy; }, 1.0);
      polyline("train_loss", "#ff7f0e", [](const EpochMetrics& m) { return m.train_loss; }, loss_max);
    } else {
      polyline("val_accuracy", "#1f77b4", [](const EpochMetrics& m) { return m.val_accuracy; }, 1.0);
      polyline("val_loss", "#ff7f0e", [](const EpochMetrics& m) { return m.val_loss; }, loss_max);
    }
    const double ly = kTop + kPlotH + 56;
    out << "    <line x1=\"" << left << "\" y1=\"" << ly << "\" x2=\"" << left + 24 << "\" y2=\"" << ly
        << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    out << "    <text x=\"" << left + 30 << "\" y=\"" << ly + 4 << "\">accuracy</text>\n";
    out << "    <line x1=\"" << left + 110 << "\" y1=\"" << ly << "\" x2=\"" << left + 134 << "\" y2=\"" << ly
        << "\" stroke=\"#ff7f0e\" stroke-width=\"2\"/>\n";
    out << "    <text x=\"" << left + 140 << "\" y=\"" << ly + 4 << "\">loss</text>\n";
    out << "  </g>\n";
  }
  out << "</svg>\n";
}

void render_curves_svg(std::span<const EpochMetrics> history, const std::filesystem::path& path) {
  auto out = open_output(path);
  render_curves_svg(history, out);
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace shrimpcnn
