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

#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shrimpcnn/shrimpcnn.hpp"

namespace shrimpcnn::cli {
namespace {

namespace fs = std::filesystem;

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

/// Flags shared by the subcommands that build or consume a split.
struct RunFlags {
  fs::path data;
  fs::path split_manifest;
  fs::path config;
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  std::size_t batch_size = 0;
  double lr = 0, alpha = 0, epsilon = 0;
  double train_fraction = 0;
  std::size_t min_class_count = 0;
  std::size_t input_size = 0;
  double target_accuracy = 0;
  int tolerance = 0;
  bool remove_background = true;
  std::size_t threads = 0;
  bool best_effort = false;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* epochs_opt = nullptr;
  CLI::Option* batch_opt = nullptr;
  CLI::Option* lr_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* fraction_opt = nullptr;
  CLI::Option* min_count_opt = nullptr;
  CLI::Option* input_size_opt = nullptr;
  CLI::Option* target_opt = nullptr;
  CLI::Option* tolerance_opt = nullptr;
  CLI::Option* background_opt = nullptr;
  CLI::Option* threads_opt = nullptr;

  void add_split_flags(CLI::App* app) {
    app->add_option("--data", data, "Dataset root with ordinary-shrimp/ and soft-shell-shrimp/");
    seed_opt = app->add_option("--seed", seed, "Seed for every random choice (default 7)");
    fraction_opt = app->add_option("--train-fraction", train_fraction, "Per-class training fraction (default 0.8)");
    min_count_opt = app->add_option("--min-class-count", min_class_count,
                                    "Mirror-augment training classes up to this size (default 30)");
    app->add_flag("--best-effort", best_effort, "Mirror what is available instead of failing below the minimum");
    app->add_option("--config", config, "JSON configuration overriding the defaults");
  }

  void add_train_flags(CLI::App* app) {
    app->add_option("--split", split_manifest, "Use a split manifest instead of splitting --data");
    epochs_opt = app->add_option("--epochs", epochs, "Training epochs (default 30)");
    batch_opt = app->add_option("--batch-size", batch_size, "Mini-batch size (default 16)");
    lr_opt = app->add_option("--lr", lr, "RMSProp learning rate (default 0.001)");
    alpha_opt = app->add_option("--alpha", alpha, "RMSProp decay of past squared gradients (default 0.9)");
    epsilon_opt = app->add_option("--epsilon", epsilon, "RMSProp epsilon (default 1e-8)");
    input_size_opt = app->add_option("--input-size", input_size, "Network input side length (default 128)");
    target_opt = app->add_option("--target-accuracy", target_accuracy,
                                 "Validation accuracy required for exit code 0 (default 0.85)");
    tolerance_opt = app->add_option("--tolerance", tolerance, "Background removal tolerance (default 28)")
                        ->check(CLI::Range(0, 255));
    background_opt = app->add_flag("--remove-background,!--keep-background", remove_background,
                                   "Flood-fill the scanner background before letterboxing (default on)");
    threads_opt = app->add_option("--threads", threads, "Worker threads (default: all hardware threads)");
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config.empty()) c = load_run_config(config, c);
    if (seed_opt && seed_opt->count()) c.hyper.seed = seed;
    if (epochs_opt && epochs_opt->count()) c.hyper.epochs = epochs;
    if (batch_opt && batch_opt->count()) c.hyper.batch_size = batch_size;
    if (lr_opt && lr_opt->count()) c.hyper.optimizer.learning_rate = lr;
    if (alpha_opt && alpha_opt->count()) c.hyper.optimizer.alpha = alpha;
    if (epsilon_opt && epsilon_opt->count()) c.hyper.optimizer.epsilon = epsilon;
    if (fraction_opt && fraction_opt->count()) c.train_fraction = train_fraction;
    if (min_count_opt && min_count_opt->count()) c.min_class_count = min_class_count;
    if (input_size_opt && input_size_opt->count()) c.model.input_size = input_size;
    if (target_opt && target_opt->count()) c.hyper.target_accuracy = target_accuracy;
    if (tolerance_opt && tolerance_opt->count()) c.preprocessing.tolerance = tolerance;
    if (background_opt && background_opt->count()) c.preprocessing.remove_background = remove_background;
    if (threads_opt && threads_opt->count()) c.hyper.threads = threads;
    return c;
  }

  DatasetSplit make_split(const RunConfig& c, std::ostream& err) const {
    DatasetSplit split;
    if (!split_manifest.empty()) {
      split = read_split_manifest(split_manifest);
      split.seed = c.hyper.seed;
      split.train_fraction = c.train_fraction;
    } else {
      if (data.empty()) throw ParameterError("either --data or --split is required");
      const ScanResult scan = scan_dataset(data);
      for (const auto& w : scan.warnings) err << "warning: " << w << '\n';
      split = holdout_split(scan.samples, c.train_fraction, c.hyper.seed);
    }
    return balance_augment(std::move(split), c.min_class_count,
                           best_effort ? BalancePolicy::kBestEffort : BalancePolicy::kStrict);
  }
};

void print_split_summary(const DatasetSplit& split, std::ostream& out) {
  for (int label = 0; label < kClassCount; ++label) {
    std::size_t originals = 0, mirrored = 0;
    for (const auto& s : split.train) {
      if (s.label == label) (s.augmented ? mirrored : originals) += 1;
    }
    out << class_folder(label) << ": train " << originals << " + " << mirrored << " mirrored, validation "
        << count_label(split.validation, label) << '\n';
  }
}

int cmd_prep(const fs::path& manifest, int tolerance, bool remove_bg, std::ostream& out) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open crop manifest " + manifest.string());
  const auto jobs = parse_crop_manifest(in, manifest.parent_path());
  for (const CropJob& job : jobs) {
    Image img = crop(read_image(job.source), job.rect);
    if (remove_bg) img = remove_background(img, tolerance);
    write_image(img, job.output);
    out << job.output.string() << " (" << img.width() << "x" << img.height() << ")\n";
  }
  out << jobs.size() << " images written\n";
  return kExitOk;
}

int cmd_train(const RunFlags& flags, const fs::path& model_path, const fs::path& csv_path,
              const fs::path& svg_path, const fs::path& split_out, bool quiet, std::ostream& out,
              std::ostream& err) {
  const RunConfig config = flags.resolve();
  config.hyper.validate();
  const DatasetSplit split = flags.make_split(config, err);
  if (!split_out.empty()) write_split_manifest(split, split_out);
  if (!quiet) print_split_summary(split, out);

  Model model = build_model(config.model, config.hyper.seed, config.preprocessing);
  if (!quiet) out << "model parameters: " << model.parameter_count() << '\n';

  const auto start = std::chrono::steady_clock::now();
  const auto history = train(model, split, config.hyper, [&](const EpochMetrics& m) {
    if (quiet) return;
    out << "epoch " << m.epoch << "/" << config.hyper.epochs << "  train_loss " << fixed(m.train_loss)
        << "  train_acc " << fixed(m.train_accuracy) << "  val_loss " << fixed(m.val_loss) << "  val_acc "
        << fixed(m.val_accuracy) << std::endl;
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  save_model(model, model_path);
  write_metrics_csv(history, csv_path);
  render_curves_svg(history, svg_path);

  const double final_acc = history.back().val_accuracy;
  const bool met = final_acc >= config.hyper.target_accuracy;
  out << "final validation accuracy " << fixed(final_acc) << " (target " << fixed(config.hyper.target_accuracy)
      << ", " << (met ? "met" : "not met") << ") in " << fixed(seconds, 1) << " s\n";
  return met ? kExitOk : kExitBelowTarget;
}

int cmd_eval(const fs::path& model_path, const RunFlags& flags, const std::string& partition, std::ostream& out,
             std::ostream& err) {
  const Model model = load_model(model_path);
  std::vector<LabeledSample> samples;
  if (!flags.split_manifest.empty()) {
    const DatasetSplit split = read_split_manifest(flags.split_manifest);
    if (partition != "train") samples.insert(samples.end(), split.validation.begin(), split.validation.end());
    if (partition != "val") samples.insert(samples.end(), split.train.begin(), split.train.end());
  } else if (!flags.data.empty()) {
    const ScanResult scan = scan_dataset(flags.data);
    for (const auto& w : scan.warnings) err << "warning: " << w << '\n';
    samples = scan.samples;
  } else {
    throw ParameterError("either --data or --split is required");
  }
  const Evaluation e = evaluate(model, std::span<const LabeledSample>(samples), flags.threads);
  out << "samples " << e.count << "  loss " << fixed(e.loss) << "  accuracy " << fixed(e.accuracy) << " ("
      << e.correct << "/" << e.count << ")\n";
  return kExitOk;
}

int cmd_predict(const fs::path& model_path, const std::vector<fs::path>& images, std::optional<bool> remove_bg,
                std::ostream& out) {
  const Model model = load_model(model_path);
  for (const auto& path : images) {
    const Prediction p = predict(model, path, remove_bg);
    out << path.string() << "\t" << p.label << "\t" << class_folder(p.label);
    for (double prob : p.probabilities) out << "\t" << fixed(prob);
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"shrimpcnn: soft-shell vs. ordinary shrimp image classifier"};
  app.name("shrimpcnn");
  app.require_subcommand(1);
  app.fallthrough(false);

  // prep
  auto* prep = app.add_subcommand("prep", "Crop, remove background and write images listed in a crop manifest");
  fs::path crop_manifest;
  int prep_tolerance = kDefaultBackgroundTolerance;
  bool prep_remove = true;
  prep->add_option("--manifest", crop_manifest, "Lines of `source-path x y w h output-path`")->required();
  prep->add_option("--tolerance", prep_tolerance, "Background removal tolerance")->check(CLI::Range(0, 255));
  prep->add_flag("--remove-background,!--keep-background", prep_remove, "Remove the background (default on)");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic two-class dataset");
  std::size_t n_ordinary = 0, n_soft = 0;
  fs::path synth_out = "synthetic-data";
  std::uint64_t synth_seed = 7;
  std::string synth_format = "ppm";
  SynthOptions synth_options;
  synth->add_option("n_ordinary", n_ordinary, "Number of ordinary-shrimp images")->required();
  synth->add_option("n_soft", n_soft, "Number of soft-shell-shrimp images")->required();
  synth->add_option("--out", synth_out, "Output dataset root")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--format", synth_format, "Image format")->check(CLI::IsMember({"ppm", "png"}))->capture_default_str();
  synth->add_option("--width", synth_options.width, "Image width")->capture_default_str();
  synth->add_option("--height", synth_options.height, "Image height")->capture_default_str();

  // split
  auto* split_cmd = app.add_subcommand("split", "Write a stratified, augmented train/validation manifest");
  RunFlags split_flags;
  fs::path split_out;
  split_flags.add_split_flags(split_cmd);
  split_cmd->add_option("--out", split_out, "Manifest path")->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "Train, validate and save a model");
  RunFlags train_flags;
  fs::path model_path = "model.sscm", csv_path = "metrics.csv", svg_path = "curves.svg", train_split_out;
  bool quiet = false;
  train_flags.add_split_flags(train_cmd);
  train_flags.add_train_flags(train_cmd);
  train_cmd->add_option("--model", model_path, "Model artifact output")->capture_default_str();
  train_cmd->add_option("--metrics-csv", csv_path, "Per-epoch metrics CSV output")->capture_default_str();
  train_cmd->add_option("--curves-svg", svg_path, "Training/validation curve chart output")->capture_default_str();
  train_cmd->add_option("--split-out", train_split_out, "Also write the split manifest used");
  train_cmd->add_flag("--quiet", quiet, "Only print the final summary");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model");
  RunFlags eval_flags;
  fs::path eval_model;
  std::string partition = "val";
  eval_cmd->add_option("--model", eval_model, "Model artifact")->required();
  eval_cmd->add_option("--data", eval_flags.data, "Evaluate every image under a dataset root");
  eval_cmd->add_option("--split", eval_flags.split_manifest, "Evaluate a partition of a split manifest");
  eval_cmd->add_option("--partition", partition, "Partition of --split")
      ->check(CLI::IsMember({"val", "train", "all"}))
      ->capture_default_str();
  eval_cmd->add_option("--threads", eval_flags.threads, "Worker threads");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Classify images with a saved model");
  fs::path predict_model;
  std::vector<fs::path> predict_images;
  bool predict_remove = true;
  predict_cmd->add_option("--model", predict_model, "Model artifact")->required();
  auto* predict_bg = predict_cmd->add_flag("--remove-background,!--keep-background", predict_remove,
                                           "Override the model's background-removal setting");
  predict_cmd->add_option("images", predict_images, "Images to classify")->required();

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "Render a metrics CSV as training/validation curves");
  fs::path plot_csv, plot_svg = "curves.svg";
  plot_cmd->add_option("--metrics-csv", plot_csv, "Metrics CSV input")->required();
  plot_cmd->add_option("--curves-svg", plot_svg, "SVG output")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (prep->parsed()) return cmd_prep(crop_manifest, prep_tolerance, prep_remove, out);
    if (synth->parsed()) {
      synth_options.format = synth_format == "png" ? ImageFormat::kPng : ImageFormat::kPpm;
      synth_generate(n_ordinary, n_soft, synth_seed, synth_out, synth_options);
      out << "wrote " << n_ordinary << " ordinary and " << n_soft << " soft-shell images under " << synth_out.string()
          << '\n';
      return kExitOk;
    }
    if (split_cmd->parsed()) {
      const RunConfig config = split_flags.resolve();
      const DatasetSplit split = split_flags.make_split(config, err);
      write_split_manifest(split, split_out);
      print_split_summary(split, out);
      return kExitOk;
    }
    if (train_cmd->parsed()) {
      return cmd_train(train_flags, model_path, csv_path, svg_path, train_split_out, quiet, out, err);
    }
    if (eval_cmd->parsed()) return cmd_eval(eval_model, eval_flags, partition, out, err);
    if (predict_cmd->parsed()) {
      std::optional<bool> override_bg;
      if (predict_bg->count()) override_bg = predict_remove;
      return cmd_predict(predict_model, predict_images, override_bg, out);
    }
    if (plot_cmd->parsed()) {
      render_curves_svg(read_metrics_csv(plot_csv), plot_svg);
      out << "wrote " << plot_svg.string() << '\n';
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace shrimpcnn::cli
