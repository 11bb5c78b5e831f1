// Copyright 2026 The Raceline Authors
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

#include "raceline/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "raceline/error.hpp"
#include "raceline/evaluation.hpp"
#include "raceline/network.hpp"
#include "raceline/pipeline.hpp"
#include "raceline/predictor.hpp"
#include "raceline/svg.hpp"
#include "raceline/synthetic.hpp"
#include "raceline/text.hpp"
#include "raceline/trackio.hpp"

namespace raceline::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kManifest = "manifest.csv";
constexpr const char* kDatasetConfig = "config.ini";

struct Overrides {
  std::string config_path;
  std::optional<double> spacing;
  std::optional<int> foresight;
  std::optional<int> sampling;
  std::optional<double> width;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<int> epochs;
};

RunConfig resolve_config(const Overrides& o, RunConfig base = {}) {
  RunConfig cfg = o.config_path.empty() ? base : parse_run_config(text::read_file(o.config_path), base);
  if (o.spacing) cfg.spacing = *o.spacing;
  if (o.foresight) cfg.foresight = *o.foresight;
  if (o.sampling) cfg.sampling = *o.sampling;
  if (o.width) cfg.vehicle_width = *o.width;
  if (o.seed) cfg.seed = *o.seed;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.epochs) cfg.train.epochs = *o.epochs;
  cfg.train.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string sample_name(const Sample& s) { return s.source.family + "__" + s.source.tag; }

PredictOptions predict_options(const RunConfig& cfg, const Overrides& o) {
  PredictOptions opt;
  if (o.spacing) opt.spacing = cfg.spacing;
  opt.max_tilt = cfg.max_tilt_deg * kDegree;
  opt.tilt_step = cfg.tilt_step_deg * kDegree;
  opt.jobs = cfg.jobs;
  return opt;
}

Track load_track(const fs::path& path) { return parse_track_csv(text::read_file(path), path.stem().string()); }

// ---------------------------------------------------------------- gen-data

struct GenDataArgs {
  std::vector<std::string> tracks;
  int synthetic = 0;
  std::string out;
};

int gen_data(const GenDataArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<Track> sources;
  std::vector<SampleFailure> failures;
  for (const auto& p : a.tracks) {
    try {
      sources.push_back(load_track(p));
    } catch (const Error& e) {
      failures.push_back({p, e.what()});
    }
  }
  if (a.synthetic > 0) {
    auto synth = synthetic::random_corpus(a.synthetic, cfg.seed);
    sources.insert(sources.end(), synth.begin(), synth.end());
  }
  if (sources.empty() && failures.empty()) throw Error(Errc::EmptyDataset, "no input tracks given");

  const auto data = generate_dataset(sources, cfg);
  failures.insert(failures.end(), data.failures.begin(), data.failures.end());

  const fs::path root(a.out);
  for (const char* sub : {"tracks", "targets", "windows"}) fs::create_directories(root / sub);
  std::vector<ManifestEntry> manifest;
  for (const auto& s : data.samples) {
    const std::string file = sample_name(s) + ".csv";
    text::write_file(root / "tracks" / file, write_track_csv(s.source.track));
    text::write_file(root / "targets" / file, write_raceline_csv(target_line(s)));
    text::write_file(root / "windows" / file, write_windows_csv(s.windows, cfg.window_spec()));
    manifest.push_back({s.source.family, s.source.tag, s.split, "tracks/" + file, "targets/" + file});
  }
  text::write_file(root / kManifest, write_manifest(manifest));
  text::write_file(root / kDatasetConfig, format_run_config(cfg));

  std::map<std::string, std::size_t> windows_per_split;
  for (const auto& s : data.samples) windows_per_split[s.split] += s.windows.size();
  out << "tracks " << data.samples.size() << " failed " << failures.size() << "\n";
  out << "families train " << data.split.train.size() << " validation " << data.split.validation.size() << " test "
      << data.split.test.size() << "\n";
  for (const auto& [split, n] : windows_per_split) out << "windows " << split << " " << n << "\n";
  for (const auto& f : failures) err << "failed: " << f.name << ": " << f.message << "\n";
  return failures.empty() ? kExitOk : kExitInput;
}

// ---------------------------------------------------------------- train

struct DatasetDir {
  fs::path root;
  std::vector<ManifestEntry> entries;
};

DatasetDir open_dataset(const std::string& dir) {
  DatasetDir d{dir, {}};
  d.entries = parse_manifest(text::read_file(d.root / kManifest));
  return d;
}

// Windows of one split; all files must share one window layout.
std::optional<WindowFile> load_split_windows(const DatasetDir& d, const std::string& split) {
  std::optional<WindowFile> all;
  for (const auto& e : d.entries) {
    if (e.split != split) continue;
    auto wf = parse_windows_csv(text::read_file(d.root / "windows" / fs::path(e.track_path).filename()));
    if (!all) {
      all = std::move(wf);
      continue;
    }
    if (wf.spec.foresight != all->spec.foresight || wf.spec.sampling != all->spec.sampling) {
      throw Error(Errc::ShapeMismatch, "window files in the dataset use different layouts");
    }
    all->windows.insert(all->windows.end(), wf.windows.begin(), wf.windows.end());
  }
  return all;
}

struct TrainArgs {
  std::string data;
  std::string model;
};

int train_cmd(const TrainArgs& a, const Overrides& o, std::ostream& out) {
  const auto dir = open_dataset(a.data);
  RunConfig base;
  if (fs::exists(dir.root / kDatasetConfig)) base = parse_run_config(text::read_file(dir.root / kDatasetConfig));
  auto cfg = resolve_config(o, base);

  auto train_set = load_split_windows(dir, "train");
  if (!train_set || train_set->windows.empty()) throw Error(Errc::EmptyDataset, "training split has no windows");
  cfg.foresight = train_set->spec.foresight;
  cfg.sampling = train_set->spec.sampling;
  cfg.l_ref = train_set->spec.l_ref;
  const auto val_set = load_split_windows(dir, "validation");

  auto model = make_model(cfg);
  out << nn::describe(model);
  const auto train_data = nn::Dataset::from_windows(train_set->windows);
  std::optional<nn::Dataset> val_data;
  if (val_set && !val_set->windows.empty()) val_data = nn::Dataset::from_windows(val_set->windows);
  out << "windows train " << train_data.size() << " validation " << (val_data ? val_data->size() : 0) << "\n";

  nn::train(model, train_data, cfg.train, val_data ? &*val_data : nullptr, [&](const nn::EpochReport& r) {
    out << "epoch " << r.epoch << " train_loss=" << text::format_double(r.train_loss);
    if (!std::isnan(r.val_loss)) {
      out << " val_loss=" << text::format_double(r.val_loss) << " val_mae=" << text::format_double(r.val_mae);
    }
    out << "\n";
  });
  nn::save_model(model, a.model);
  out << "model written to " << a.model << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- predict

struct PredictArgs {
  std::string model;
  std::string track;
  std::string out;
  std::string svg;
  std::string reference;
};

int predict_cmd(const PredictArgs& a, const RunConfig& cfg, const Overrides& o, std::ostream& out) {
  const auto model = nn::load_model(a.model);
  const auto track = load_track(a.track);
  const auto p = predict_line(model, track, cfg.vehicle_width, predict_options(cfg, o));
  const auto csv = write_raceline_csv(p.line);
  if (a.out.empty()) {
    out << csv;
  } else {
    text::write_file(a.out, csv);
  }
  if (!a.svg.empty()) {
    std::optional<RacingLine> ref;
    if (!a.reference.empty()) ref = parse_raceline_csv(text::read_file(a.reference));
    text::write_file(a.svg, racing_line_svg(p.normals, p.line, ref ? &*ref : nullptr));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string model;
  std::string data;
  std::string split = "test";
  bool use_targets = false;
};

int evaluate_cmd(const EvaluateArgs& a, const Overrides& o, std::ostream& out) {
  const auto dir = open_dataset(a.data);
  RunConfig base;
  if (fs::exists(dir.root / kDatasetConfig)) base = parse_run_config(text::read_file(dir.root / kDatasetConfig));
  const auto cfg = resolve_config(o, base);
  if (!a.use_targets && a.model.empty()) throw Error(Errc::InvalidConfig, "--model is required unless --use-targets");
  std::optional<nn::Mlp<double>> model;
  if (!a.use_targets) model = nn::load_model(a.model);

  struct Row {
    std::string name;
    std::size_t normals;
    ErrorReport report;
  };
  std::vector<Row> rows;
  for (const auto& e : dir.entries) {
    if (e.split != a.split) continue;
    const auto track = load_track(dir.root / e.track_path);
    if (e.targets_path.empty() || !fs::exists(dir.root / e.targets_path)) {
      throw Error(Errc::MissingTargets, "no targets for " + e.track_path);
    }
    const auto ref = parse_raceline_csv(text::read_file(dir.root / e.targets_path));
    ErrorReport r;
    std::size_t normals = 0;
    if (a.use_targets) {
      const auto ns = prepare_normals(track, cfg.geometry());
      r = evaluate_line(ref, ref, ns, cfg.apex);
      normals = ns.size();
    } else {
      const auto opt = predict_options(cfg, o);
      const auto p = predict_line(*model, track, cfg.vehicle_width, opt);
      if (p.line.size() != ref.size()) {
        throw Error(Errc::LengthMismatch, e.track_path + ": targets and prediction use different normals");
      }
      r = evaluate_line(p.line, ref, p.normals, cfg.apex);
      r.latency = measure_latency(*model, track, cfg.latency_repetitions, cfg.vehicle_width, opt).median_total;
      normals = p.normals.size();
    }
    rows.push_back({fs::path(e.track_path).stem().string(), normals, std::move(r)});
  }
  if (rows.empty()) throw Error(Errc::Empty, "split '" + a.split + "' has no tracks");

  std::vector<ErrorReport> reports;
  for (const auto& r : rows) reports.push_back(r.report);
  const auto pooled = aggregate(reports);

  auto apex = [](const ErrorReport& r) { return r.apex_error_mae ? fixed(*r.apex_error_mae) : std::string("-"); };
  auto time = [](const ErrorReport& r) { return r.latency ? fixed(*r.latency * 1e3, 2) : std::string("-"); };
  std::size_t name_width = 6;
  for (const auto& r : rows) name_width = std::max(name_width, r.name.size());
  auto line = [&](const std::string& n, const std::string& k, const std::string& rmse, const std::string& mae,
                  const std::string& ap, const std::string& t) {
    out << std::left << std::setw(static_cast<int>(name_width)) << n << std::right << std::setw(9) << k
        << std::setw(11) << rmse << std::setw(10) << mae << std::setw(18) << ap << std::setw(19) << t << "\n";
  };
  line("Track", "Normals", "RMSE (m)", "MAE (m)", "Apex Error (m)", "Solution time (ms)");
  for (const auto& r : rows) {
    line(r.name, std::to_string(r.normals), fixed(r.report.rmse), fixed(r.report.mae), apex(r.report), time(r.report));
  }
  line("pooled", "", fixed(pooled.rmse), fixed(pooled.mae), apex(pooled), time(pooled));

  auto kv = [&](const std::string& k, double v) { out << k << "=" << text::format_double(v) << "\n"; };
  out << "tracks=" << rows.size() << "\n";
  kv("rmse", pooled.rmse);
  kv("mae", pooled.mae);
  kv("mean_error", pooled.mean_error);
  kv("ci50", pooled.ci50);
  kv("ci95", pooled.ci95);
  if (pooled.apex_error_mae) kv("apex_error", *pooled.apex_error_mae);
  if (pooled.latency) kv("latency", *pooled.latency);
  return kExitOk;
}

// ---------------------------------------------------------------- plot

struct PlotArgs {
  std::string track;
  std::vector<std::string> lines;
  std::string svg;
};

int plot_cmd(const PlotArgs& a, const RunConfig& cfg) {
  static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};
  const auto track = load_track(a.track);
  const auto ns = prepare_normals(track, cfg.geometry());
  std::vector<SvgSeries> series;
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    const auto line = parse_raceline_csv(text::read_file(a.lines[i]));
    series.push_back({fs::path(a.lines[i]).stem().string(), line.points, palette[i % 5], 1.0, track.closed});
  }
  text::write_file(a.svg, render_svg(ns, series));
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string model;
  std::string track;
  int normals = 300;
  int repetitions = 20;
};

int bench_cmd(const BenchArgs& a, const RunConfig& cfg, const Overrides& o, std::ostream& out) {
  const auto model = a.model.empty() ? make_model(cfg) : nn::load_model(a.model);
  Track track;
  if (!a.track.empty()) {
    track = load_track(a.track);
  } else {
    if (a.normals < 8) throw Error(Errc::InvalidConfig, "--normals must be at least 8");
    synthetic::RandomTrackSpec spec;
    spec.mean_radius = a.normals * model.meta.spacing / (2.0 * std::numbers::pi);
    track = synthetic::random_track(cfg.seed, spec);
  }
  const auto r = measure_latency(model, track, a.repetitions, cfg.vehicle_width, predict_options(cfg, o));
  out << "normals=" << r.normal_count << "\nrepetitions=" << r.repetitions << "\njobs=" << r.jobs
      << "\nhardware_threads=" << r.hardware_threads << "\nmedian_total_ms=" << fixed(r.median_total * 1e3)
      << "\nmedian_geometry_ms=" << fixed(r.median_geometry * 1e3)
      << "\nmedian_network_ms=" << fixed(r.median_network * 1e3) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Racing-line prediction toolkit", "raceline"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config_path, "INI run configuration")->check(CLI::ExistingFile);
  app.add_option("--spacing", o.spacing, "normal spacing in metres");
  app.add_option("--foresight", o.foresight, "normals on each side of a window");
  app.add_option("--sampling", o.sampling, "output half-width of a window");
  app.add_option("--width", o.width, "vehicle width in metres");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--jobs", o.jobs, "worker threads, 0 for all cores");

  GenDataArgs gen;
  auto* gen_app = app.add_subcommand("gen-data", "augment tracks and compute oracle targets and windows");
  gen_app->add_option("tracks", gen.tracks, "track CSV files");
  gen_app->add_option("--synthetic", gen.synthetic, "add this many random tracks");
  gen_app->add_option("--out", gen.out, "dataset directory")->required();

  TrainArgs tr;
  auto* train_app = app.add_subcommand("train", "train a model on a generated dataset");
  train_app->add_option("--data", tr.data, "dataset directory")->required();
  train_app->add_option("--out", tr.model, "model file to write")->required();
  train_app->add_option("--epochs", o.epochs, "training epochs");

  PredictArgs pr;
  auto* predict_app = app.add_subcommand("predict", "predict the racing line of a track");
  predict_app->add_option("--model", pr.model, "model file")->required();
  predict_app->add_option("--track", pr.track, "track CSV")->required();
  predict_app->add_option("--out", pr.out, "racing-line CSV, stdout when omitted");
  predict_app->add_option("--svg", pr.svg, "plot file");
  predict_app->add_option("--reference", pr.reference, "racing-line CSV drawn for comparison");

  EvaluateArgs ev;
  auto* eval_app = app.add_subcommand("evaluate", "compare predictions with oracle targets");
  eval_app->add_option("--model", ev.model, "model file");
  eval_app->add_option("--data", ev.data, "dataset directory")->required();
  eval_app->add_option("--split", ev.split, "split to evaluate")->check(CLI::IsMember({"train", "validation", "test"}));
  eval_app->add_flag("--use-targets", ev.use_targets, "score the targets against themselves");

  PlotArgs pl;
  auto* plot_app = app.add_subcommand("plot", "draw a track with racing lines");
  plot_app->add_option("--track", pl.track, "track CSV")->required();
  plot_app->add_option("--line", pl.lines, "racing-line CSV, repeatable");
  plot_app->add_option("--svg", pl.svg, "plot file")->required();

  BenchArgs be;
  auto* bench_app = app.add_subcommand("bench", "measure prediction latency");
  bench_app->add_option("--model", be.model, "model file, an untrained model when omitted");
  bench_app->add_option("--track", be.track, "track CSV, a random track when omitted");
  bench_app->add_option("--normals", be.normals, "approximate normal count of the random track");
  bench_app->add_option("--repetitions", be.repetitions, "timed runs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*train_app) return train_cmd(tr, o, out);
    if (*eval_app) return evaluate_cmd(ev, o, out);
    const auto cfg = resolve_config(o);
    if (*gen_app) return gen_data(gen, cfg, out, err);
    if (*predict_app) return predict_cmd(pr, cfg, o, out);
    if (*plot_app) return plot_cmd(pl, cfg);
    if (*bench_app) return bench_cmd(be, cfg, o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace raceline::cli
