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

#include "raceline/network.hpp"

#include <sstream>

#include "raceline/text.hpp"

namespace raceline::nn {
namespace {

constexpr std::string_view kMagic = "raceline-mlp";

// Whitespace tokenizer that reports truncation as CorruptFile.
class Tokens {
 public:
  explicit Tokens(std::string_view text) : text_(text) {}

  std::string_view next() {
    skip();
    if (pos_ >= text_.size()) throw Error(Errc::CorruptFile, "model file ends unexpectedly");
    const auto start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void expect(std::string_view word) {
    const auto got = next();
    if (got != word) {
      throw Error(Errc::CorruptFile, "expected '" + std::string(word) + "', found '" + std::string(got) + "'");
    }
  }

  double number() {
    const auto tok = next();
    const auto v = text::parse_double(tok);
    if (!v) throw Error(Errc::CorruptFile, "bad number '" + std::string(tok) + "'");
    return *v;
  }

  long integer() {
    const auto tok = next();
    const auto v = text::parse_int(tok);
    if (!v) throw Error(Errc::CorruptFile, "bad integer '" + std::string(tok) + "'");
    return static_cast<long>(*v);
  }

  // Rest of the current line, trimmed.
  std::string_view rest_of_line() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    const auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    return text::trim(text_.substr(start, pos_ - start));
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
  void skip() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(Activation a) {
  return a == Activation::Sigmoid ? "sigmoid" : "hard_sigmoid";
}

Activation activation_from_string(std::string_view name) {
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "hard_sigmoid") return Activation::HardSigmoid;
  throw Error(Errc::CorruptFile, "unknown activation '" + std::string(name) + "'");
}

std::string save_model_text(const Mlp<double>& model) {
  check_shapes(model);
  const auto& m = model.meta;
  const auto& t = m.training;
  std::ostringstream out;
  out << kMagic << ' ' << kModelFormatVersion << '\n';
  out << "foresight " << m.foresight << '\n';
  out << "sampling " << m.sampling << '\n';
  out << "l_ref " << text::format_double(m.l_ref) << '\n';
  out << "spacing " << text::format_double(m.spacing) << '\n';
  out << "feature_ordering " << m.feature_ordering << '\n';
  out << "output_ordering offset:-s..s\n";
  out << "huber_delta " << text::format_double(t.huber_delta) << '\n';
  out << "learning_rate " << text::format_double(t.learning_rate) << '\n';
  out << "beta1 " << text::format_double(t.beta1) << '\n';
  out << "beta2 " << text::format_double(t.beta2) << '\n';
  out << "epsilon " << text::format_double(t.epsilon) << '\n';
  out << "batch_size " << t.batch_size << '\n';
  out << "epochs " << t.epochs << '\n';
  out << "seed " << t.seed << '\n';
  out << "layers " << model.layers.size() << '\n';
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    out << "layer " << l << ' ' << layer.weight.cols() << ' ' << layer.weight.rows() << ' '
        << to_string(layer.activation) << '\n';
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      out << 'w';
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) out << ' ' << text::format_double(layer.weight(r, c));
      out << '\n';
    }
    out << 'b';
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) out << ' ' << text::format_double(layer.bias[r]);
    out << '\n';
  }
  out << "end\n";
  return out.str();
}

Mlp<double> load_model_text(std::string_view content) {
  Tokens tok(content);
  if (tok.next() != kMagic) throw Error(Errc::CorruptFile, "not a raceline model file");
  const long version = tok.integer();
  if (version != kModelFormatVersion) {
    throw Error(Errc::VersionMismatch, "model format version " + std::to_string(version) + " is not supported");
  }
  Mlp<double> model;
  auto& m = model.meta;
  auto& t = m.training;
  tok.expect("foresight");
  m.foresight = static_cast<int>(tok.integer());
  tok.expect("sampling");
  m.sampling = static_cast<int>(tok.integer());
  tok.expect("l_ref");
  m.l_ref = tok.number();
  tok.expect("spacing");
  m.spacing = tok.number();
  tok.expect("feature_ordering");
  m.feature_ordering = std::string(tok.rest_of_line());
  tok.expect("output_ordering");
  if (tok.rest_of_line() != "offset:-s..s") throw Error(Errc::VersionMismatch, "unknown output ordering");
  tok.expect("huber_delta");
  t.huber_delta = tok.number();
  tok.expect("learning_rate");
  t.learning_rate = tok.number();
  tok.expect("beta1");
  t.beta1 = tok.number();
  tok.expect("beta2");
  t.beta2 = tok.number();
  tok.expect("epsilon");
  t.epsilon = tok.number();
  tok.expect("batch_size");
  t.batch_size = static_cast<int>(tok.integer());
  tok.expect("epochs");
  t.epochs = static_cast<int>(tok.integer());
  tok.expect("seed");
  t.seed = static_cast<std::uint64_t>(tok.integer());
  tok.expect("layers");
  const long depth = tok.integer();
  if (depth < 1 || depth > 1000) throw Error(Errc::CorruptFile, "bad layer count");
  for (long l = 0; l < depth; ++l) {
    tok.expect("layer");
    if (tok.integer() != l) throw Error(Errc::CorruptFile, "layers out of order");
    const long in = tok.integer();
    const long out = tok.integer();
    if (in < 1 || out < 1) throw Error(Errc::CorruptFile, "bad layer shape");
    Layer<double> layer;
    layer.activation = activation_from_string(tok.next());
    layer.weight.resize(out, in);
    for (long r = 0; r < out; ++r) {
      tok.expect("w");
      for (long c = 0; c < in; ++c) layer.weight(r, c) = tok.number();
    }
    tok.expect("b");
    layer.bias.resize(out);
    for (long r = 0; r < out; ++r) layer.bias[r] = tok.number();
    model.layers.push_back(std::move(layer));
  }
  tok.expect("end");
  try {
    check_shapes(model);
  } catch (const Error& e) {
    throw Error(Errc::CorruptFile, e.what());
  }
  return model;
}

void save_model(const Mlp<double>& model, const std::string& path) { text::write_file(path, save_model_text(model)); }

Mlp<double> load_model(const std::string& path) { return load_model_text(text::read_file(path)); }

void require_window_config(const ModelMeta& meta, int foresight, int sampling, double l_ref) {
  if (meta.foresight != foresight || meta.sampling != sampling || meta.l_ref != l_ref) {
    throw Error(Errc::VersionMismatch, "model was trained for f=" + std::to_string(meta.foresight) +
                                           " s=" + std::to_string(meta.sampling) + " l_ref=" +
                                           text::format_double(meta.l_ref));
  }
  if (meta.feature_ordering != kFeatureOrdering) throw Error(Errc::VersionMismatch, "unknown feature ordering");
}

void check_window_shapes(const Mlp<double>& model) {
  const WindowSpec spec{model.meta.foresight, model.meta.sampling, model.meta.l_ref};
  if (model.meta.sampling < 0 || model.meta.sampling > model.meta.foresight ||
      model.input_size() != spec.input_size() || model.output_size() != spec.output_size()) {
    throw Error(Errc::IncompatibleModel, "layer shapes do not match the model's window metadata");
  }
  if (model.meta.feature_ordering != kFeatureOrdering) {
    throw Error(Errc::IncompatibleModel, "unknown feature ordering");
  }
}

std::string describe(const Mlp<double>& model) {
  std::ostringstream out;
  const auto sizes = model.layer_sizes();
  out << "layers:";
  for (std::size_t i = 0; i < sizes.size(); ++i) out << (i ? "-" : " ") << sizes[i];
  out << "\nhidden:";
  for (std::size_t i = 1; i + 1 < sizes.size(); ++i) out << ' ' << sizes[i];
  out << "\nactivations:";
  for (const auto& l : model.layers) out << ' ' << to_string(l.activation);
  out << "\nforesight " << model.meta.foresight << ", sampling " << model.meta.sampling << ", l_ref "
      << text::format_double(model.meta.l_ref) << ", parameters " << model.parameter_count() << '\n';
  return out.str();
}

}  // namespace raceline::nn
