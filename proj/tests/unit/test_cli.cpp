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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "raceline/cli.hpp"
#include "raceline/dataset.hpp"
#include "raceline/network.hpp"
#include "raceline/synthetic.hpp"
#include "raceline/text.hpp"
#include "raceline/trackio.hpp"
#include "raceline/windows.hpp"

using namespace raceline;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("raceline_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

constexpr const char* kSmall = R"(foresight = 4
sampling = 1
seed = 5
[augment]
scales = 1
flip = true
reverse = false
[train]
hidden = 8
epochs = 2
batch_size = 64
[evaluate]
latency_repetitions = 1
)";

}  // namespace

TEST_CASE("full workflow through the command line") {
  TempDir dir("flow");
  text::write_file(dir / "small.ini", kSmall);
  const auto data = dir / "data";

  auto gen = run({"--config", dir / "small.ini", "gen-data", "--synthetic", "8", "--out", data});
  REQUIRE(gen.code == cli::kExitOk);
  CHECK(gen.out.find("tracks 16 failed 0") != std::string::npos);
  const auto manifest = parse_manifest(text::read_file(data + "/manifest.csv"));
  CHECK(manifest.size() == 16);
  for (const auto& e : manifest) {
    CHECK(fs::exists(data + "/" + e.track_path));
    CHECK(fs::exists(data + "/" + e.targets_path));
  }

  auto tr = run({"train", "--data", data, "--out", dir / "model.txt"});
  REQUIRE(tr.code == cli::kExitOk);
  CHECK(tr.out.find("epoch 2 ") != std::string::npos);
  const auto model = nn::load_model(dir / "model.txt");
  CHECK(model.meta.foresight == 4);
  CHECK(model.meta.sampling == 1);
  CHECK(model.layer_sizes() == std::vector<int>{WindowSpec{4, 1}.input_size(), 8, 3});

  auto pr = run({"predict", "--model", dir / "model.txt", "--track", data + "/" + manifest[0].track_path, "--svg",
                 dir / "p.svg", "--reference", data + "/" + manifest[0].targets_path});
  REQUIRE(pr.code == cli::kExitOk);
  const auto line = parse_raceline_csv(pr.out);
  const auto ref = parse_raceline_csv(text::read_file(data + "/" + manifest[0].targets_path));
  CHECK(line.size() == ref.size());
  CHECK(line.source == LineSource::Predicted);
  CHECK(text::read_file(dir / "p.svg").find("legend") != std::string::npos);

  auto ev = run({"evaluate", "--model", dir / "model.txt", "--data", data, "--split", "train"});
  REQUIRE(ev.code == cli::kExitOk);
  CHECK(ev.out.find("RMSE (m)") != std::string::npos);
  CHECK(ev.out.find("Apex Error (m)") != std::string::npos);
  CHECK(ev.out.find("\nrmse=") != std::string::npos);
  CHECK(ev.out.find("\nlatency=") != std::string::npos);

  auto stub = run({"evaluate", "--use-targets", "--data", data, "--split", "train"});
  REQUIRE(stub.code == cli::kExitOk);
  CHECK(stub.out.find("\nrmse=0\n") != std::string::npos);
  CHECK(stub.out.find("\nmae=0\n") != std::string::npos);

  auto pl = run({"plot", "--track", data + "/" + manifest[0].track_path, "--line", data + "/" + manifest[0].targets_path,
                 "--svg", dir / "q.svg"});
  REQUIRE(pl.code == cli::kExitOk);
  CHECK(text::read_file(dir / "q.svg").find("<svg") != std::string::npos);
}

TEST_CASE("gen-data isolates bad tracks and reports them") {
  TempDir dir("bad");
  text::write_file(dir / "small.ini", kSmall);
  text::write_file(dir / "broken.csv", "1,2\n3,4\n");
  text::write_file(dir / "ring.csv", write_track_csv(synthetic::circle(60.0, 5.0, 5.0)));
  auto r = run({"--config", dir / "small.ini", "gen-data", dir / "broken.csv", dir / "ring.csv", "--out", dir / "d"});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find("broken.csv") != std::string::npos);
  CHECK(parse_manifest(text::read_file(dir / "d/manifest.csv")).size() == 2);
}

TEST_CASE("gen-data output does not depend on thread count") {
  TempDir dir("jobs");
  text::write_file(dir / "small.ini", kSmall);
  REQUIRE(run({"--config", dir / "small.ini", "gen-data", "--synthetic", "4", "--out", dir / "a"}).code == 0);
  REQUIRE(run({"--config", dir / "small.ini", "gen-data", "--synthetic", "4", "--out", dir / "b", "--jobs", "3"})
              .code == 0);
  for (const auto& e : fs::directory_iterator(dir / "a/targets")) {
    CHECK(text::read_file(e.path()) == text::read_file(dir / ("b/targets/" + e.path().filename().string())));
  }
  CHECK(text::read_file(dir / "a/manifest.csv") == text::read_file(dir / "b/manifest.csv"));
}

TEST_CASE("flags override the config file") {
  TempDir dir("override");
  text::write_file(dir / "small.ini", kSmall);
  auto r = run({"--config", dir / "small.ini", "--foresight", "3", "gen-data", "--synthetic", "3", "--out", dir / "d"});
  REQUIRE(r.code == 0);
  CHECK(text::read_file(dir / "d/config.ini").find("foresight = 3\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir dir("codes");
  CHECK(run({}).code == cli::kExitInput);
  CHECK(run({"--help"}).code == cli::kExitOk);
  CHECK(run({"predict", "--track", "x.csv"}).code == cli::kExitInput);  // --model missing
  CHECK(run({"predict", "--model", dir / "none.txt", "--track", dir / "none.csv"}).code == cli::kExitInput);
  CHECK(run({"--spacing", "-1", "bench"}).code == cli::kExitInput);

  text::write_file(dir / "manifest.csv", "c,s1,test,tracks/a.csv,\n");
  fs::create_directories(dir / "tracks");
  text::write_file(dir / "tracks/a.csv", write_track_csv(synthetic::circle(60.0, 5.0, 5.0)));
  auto missing = run({"evaluate", "--use-targets", "--data", dir.path.string()});
  CHECK(missing.code == cli::kExitInput);
  CHECK(missing.err.find("MissingTargets") != std::string::npos);

  text::write_file(dir / "manifest.csv", "");
  auto empty = run({"train", "--data", dir.path.string(), "--out", dir / "m.txt"});
  CHECK(empty.code == cli::kExitInput);
  CHECK(empty.err.find("EmptyDataset") != std::string::npos);
}

TEST_CASE("bench reports stage times") {
  auto r = run({"--foresight", "4", "--sampling", "1", "bench", "--normals", "60", "--repetitions", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("median_total_ms=") != std::string::npos);
  CHECK(r.out.find("median_geometry_ms=") != std::string::npos);
}
