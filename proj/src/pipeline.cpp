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

#include "raceline/pipeline.hpp"

#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "raceline/error.hpp"
#include "raceline/parallel.hpp"
#include "raceline/text.hpp"

namespace raceline {
namespace {

namespace pt = boost::property_tree;

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (auto field : text::split(value, ',')) {
    const auto v = text::parse_double(text::trim(field));
    if (!v) throw Error(Errc::InvalidConfig, "bad list value for " + key + ": '" + value + "'");
    out.push_back(*v);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(Errc::InvalidConfig, "bad boolean for " + key + ": '" + value + "'");
}

double parse_number(const std::string& key, const std::string& value) {
  const auto v = text::parse_double(value);
  if (!v) throw Error(Errc::InvalidConfig, "bad number for " + key + ": '" + value + "'");
  return *v;
}

long long parse_integer(const std::string& key, const std::string& value) {
  const auto v = text::parse_int(value);
  if (!v) throw Error(Errc::InvalidConfig, "bad integer for " + key + ": '" + value + "'");
  return *v;
}

void assign(RunConfig& c, const std::string& key, const std::string& value) {
  auto num = [&] { return parse_number(key, value); };
  auto integer = [&] { return static_cast<int>(parse_integer(key, value)); };
  if (key == "spacing") c.spacing = num();
  else if (key == "foresight") c.foresight = integer();
  else if (key == "sampling") c.sampling = integer();
  else if (key == "l_ref") c.l_ref = num();
  else if (key == "width") c.vehicle_width = num();
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_integer(key, value));
  else if (key == "jobs") c.jobs = integer();
  else if (key == "geometry.max_tilt_deg") c.max_tilt_deg = num();
  else if (key == "geometry.tilt_step_deg") c.tilt_step_deg = num();
  else if (key == "oracle.max_iters") c.oracle.max_iters = integer();
  else if (key == "oracle.tol") c.oracle.tol = num();
  else if (key == "oracle.step_size") c.oracle.step_size = num();
  else if (key == "oracle.margin") c.oracle.margin = num();
  else if (key == "augment.scales") c.augment.scales = parse_list(key, value);
  else if (key == "augment.flip") c.augment.flip = parse_bool(key, value);
  else if (key == "augment.reverse") c.augment.reverse = parse_bool(key, value);
  else if (key == "split.train") c.split.train_frac = num();
  else if (key == "split.validation") c.split.val_frac = num();
  else if (key == "split.test") c.split.test_frac = num();
  else if (key == "train.hidden") {
    c.hidden.clear();
    for (double v : parse_list(key, value)) c.hidden.push_back(static_cast<int>(v));
  } else if (key == "train.huber_delta") c.train.huber_delta = num();
  else if (key == "train.learning_rate") c.train.learning_rate = num();
  else if (key == "train.beta1") c.train.beta1 = num();
  else if (key == "train.beta2") c.train.beta2 = num();
  else if (key == "train.epsilon") c.train.epsilon = num();
  else if (key == "train.batch_size") c.train.batch_size = integer();
  else if (key == "train.epochs") c.train.epochs = integer();
  else if (key == "evaluate.apex_curvature") c.apex.min_curvature = num();
  else if (key == "evaluate.apex_radius") c.apex.radius = integer();
  else if (key == "evaluate.latency_repetitions") c.latency_repetitions = integer();
  else throw Error(Errc::InvalidConfig, "unknown config key '" + key + "'");
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + text::format_double(v[i]);
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (!(spacing > 0.0)) throw Error(Errc::ZeroSpacing, "spacing must be positive");
  if (foresight < 0 || sampling < 0 || sampling > foresight) {
    throw Error(Errc::InvalidConfig, "need 0 <= sampling <= foresight");
  }
  if (!(l_ref > 0.0)) throw Error(Errc::InvalidConfig, "l_ref must be positive");
  if (!(vehicle_width >= 0.0)) throw Error(Errc::InvalidConfig, "vehicle width must be non-negative");
  if (jobs < 0) throw Error(Errc::InvalidConfig, "jobs must be >= 0");
  if (!(max_tilt_deg > 0.0 && max_tilt_deg < 90.0 && tilt_step_deg > 0.0)) {
    throw Error(Errc::InvalidConfig, "tilt limits must satisfy 0 < step, 0 < max < 90 degrees");
  }
  if (hidden.empty()) throw Error(Errc::InvalidConfig, "at least one hidden layer is required");
  for (int h : hidden) {
    if (h < 1) throw Error(Errc::InvalidConfig, "hidden sizes must be positive");
  }
  if (latency_repetitions < 1) throw Error(Errc::InvalidConfig, "latency repetitions must be >= 1");
  if (!(apex.min_curvature >= 0.0) || apex.radius < 0) throw Error(Errc::InvalidConfig, "bad apex settings");
  oracle.validate();
  augment.validate();
  split.validate();
  train.validate();
}

GeometryConfig RunConfig::geometry() const {
  return {spacing, max_tilt_deg * kDegree, tilt_step_deg * kDegree};
}

RunConfig parse_run_config(std::string_view ini, RunConfig base) {
  pt::ptree tree;
  std::istringstream in{std::string(ini)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(Errc::InvalidConfig, std::string("config: ") + e.what());
  }
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      assign(base, key, std::string(text::trim(node.data())));
      continue;
    }
    const std::set<std::string> sections{"geometry", "oracle", "augment", "split", "train", "evaluate"};
    if (!sections.count(key)) throw Error(Errc::InvalidConfig, "unknown config section [" + key + "]");
    for (const auto& [sub, leaf] : node) assign(base, key + "." + sub, std::string(text::trim(leaf.data())));
  }
  base.validate();
  return base;
}

std::string format_run_config(const RunConfig& c) {
  std::ostringstream o;
  auto f = [](double v) { return text::format_double(v); };
  o << "spacing = " << f(c.spacing) << "\nforesight = " << c.foresight << "\nsampling = " << c.sampling
    << "\nl_ref = " << f(c.l_ref) << "\nwidth = " << f(c.vehicle_width) << "\nseed = " << c.seed
    << "\njobs = " << c.jobs << "\n\n[geometry]\nmax_tilt_deg = " << f(c.max_tilt_deg)
    << "\ntilt_step_deg = " << f(c.tilt_step_deg) << "\n\n[oracle]\nmax_iters = " << c.oracle.max_iters
    << "\ntol = " << f(c.oracle.tol) << "\nstep_size = " << f(c.oracle.step_size) << "\nmargin = " << f(c.oracle.margin)
    << "\n\n[augment]\nscales = " << join(c.augment.scales) << "\nflip = " << (c.augment.flip ? "true" : "false")
    << "\nreverse = " << (c.augment.reverse ? "true" : "false") << "\n\n[split]\ntrain = " << f(c.split.train_frac)
    << "\nvalidation = " << f(c.split.val_frac) << "\ntest = " << f(c.split.test_frac) << "\n\n[train]\nhidden = ";
  for (std::size_t i = 0; i < c.hidden.size(); ++i) o << (i ? "," : "") << c.hidden[i];
  o << "\nhuber_delta = " << f(c.train.huber_delta) << "\nlearning_rate = " << f(c.train.learning_rate)
    << "\nbeta1 = " << f(c.train.beta1) << "\nbeta2 = " << f(c.train.beta2) << "\nepsilon = " << f(c.train.epsilon)
    << "\nbatch_size = " << c.train.batch_size << "\nepochs = " << c.train.epochs
    << "\n\n[evaluate]\napex_curvature = " << f(c.apex.min_curvature) << "\napex_radius = " << c.apex.radius
    << "\nlatency_repetitions = " << c.latency_repetitions << "\n";
  return o.str();
}

GeneratedData generate_dataset(const std::vector<Track>& sources, const RunConfig& cfg) {
  cfg.validate();
  std::vector<AugmentedTrack> jobs;
  std::vector<std::string> families;
  for (const auto& t : sources) {
    auto aug = augment_track(t, cfg.augment);
    families.push_back(t.name);
    jobs.insert(jobs.end(), std::make_move_iterator(aug.begin()), std::make_move_iterator(aug.end()));
  }

  GeneratedData data;
  std::set<std::string> unique(families.begin(), families.end());
  if (unique.size() >= 3) {
    auto spec = cfg.split;
    spec.seed = cfg.seed;
    data.split = split_dataset(families, spec);
  } else {
    data.split.train.assign(unique.begin(), unique.end());
  }
  auto split_of = [&](const std::string& family) -> std::string {
    for (const auto& f : data.split.validation) {
      if (f == family) return "validation";
    }
    for (const auto& f : data.split.test) {
      if (f == family) return "test";
    }
    return "train";
  };

  std::vector<std::optional<Sample>> done(jobs.size());
  std::vector<std::string> errors(jobs.size());
  const auto geometry = cfg.geometry();
  parallel_for(jobs.size(), cfg.jobs, [&](std::size_t i) {
    try {
      Sample s;
      s.source = jobs[i];
      auto targets = generate_targets(s.source.track, cfg.oracle, geometry);
      s.normals = std::move(targets.normals);
      s.w = std::move(targets.w);
      s.windows = make_windows(encode_features(s.normals, cfg.l_ref), s.w, cfg.foresight, cfg.sampling,
                               s.normals.cyclic);
      s.split = split_of(s.source.family);
      done[i] = std::move(s);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (done[i]) {
      data.samples.push_back(std::move(*done[i]));
    } else {
      data.failures.push_back({jobs[i].track.name, errors[i]});
    }
  }
  return data;
}

nn::Dataset stack_windows(const std::vector<Sample>& samples, std::string_view split) {
  std::vector<Window> all;
  for (const auto& s : samples) {
    if (s.split == split) all.insert(all.end(), s.windows.begin(), s.windows.end());
  }
  if (all.empty()) return {};
  return nn::Dataset::from_windows(all);
}

nn::Mlp<double> make_model(const RunConfig& cfg) {
  return nn::make_window_mlp<double>(cfg.window_spec(), cfg.hidden, cfg.seed, cfg.spacing);
}

RacingLine target_line(const Sample& sample) {
  RacingLine line;
  line.w = sample.w;
  line.points = waypoints_to_world(sample.normals, sample.w);
  line.source = LineSource::Oracle;
  return line;
}

}  // namespace raceline
