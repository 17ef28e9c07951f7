// Copyright 2026 The Phonetraits Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHONETRAITS_PIPELINE_H_
#define PHONETRAITS_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "phonetraits/config.h"
#include "phonetraits/evaluate.h"
#include "phonetraits/features.h"
#include "phonetraits/ingest.h"
#include "phonetraits/learn.h"
#include "phonetraits/synth.h"

namespace phonetraits {

inline const std::vector<std::string>& PipelineStages() {
  static const std::vector<std::string> kStages = {
      "synth", "ingest", "extract", "score", "reduce", "train", "evaluate"};
  return kStages;
}

struct PipelineConfig {
  std::filesystem::path output_dir = "pipeline_out";
  std::set<std::string> stages{PipelineStages().begin(),
                               PipelineStages().end()};
  std::uint64_t seed = 2016;
  int jobs = 1;

  // Used when the synth stage is disabled.
  std::filesystem::path corpus_path;
  std::filesystem::path key_path;  // empty -> default BFI-44 key

  SynthConfig synth;
  FilterThresholds filter;
  FeatureConfig features;
  EvaluationProtocol evaluation;
  GridSpec grid{{1.0}, {0.1}, {8}, KernelType::kRbf};
  CvOptions cv{10, 5, 0, 200, 1, {}};
  std::string train_target = "E";
};

// Reads every module section of a key-value config ("pipeline", "synth",
// "ingest", "features", "scoring", "reduce", "learn", "evaluate").
PipelineConfig LoadPipelineConfig(const KeyValueConfig& config);
FeatureConfig LoadFeatureConfig(const KeyValueConfig& config);
SynthConfig LoadSynthConfig(const KeyValueConfig& config);
EvaluationProtocol LoadEvaluationProtocol(const KeyValueConfig& config);
GridSpec LoadGridSpec(const KeyValueConfig& config);

struct ManifestFile {
  std::string path;  // relative to the output directory
  std::string sha256;
};

struct ManifestEntry {
  std::string stage;
  bool ok = false;
  std::string diagnostic;
  std::vector<ManifestFile> files;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  bool ok = true;
};

// Runs the enabled stages in dependency order and writes manifest.json into
// the output directory. A failing stage stops the run; the manifest then
// carries the diagnostic.
Manifest RunPipeline(const PipelineConfig& config);
void WriteManifest(const Manifest& manifest, std::ostream& out);

std::string Sha256File(const std::filesystem::path& path);

// Figure-ready tables.
struct FigureTables {
  // method, run, S
  std::vector<std::tuple<std::string, int, double>> improvement_rows;
  // question (1-based), trait, loading
  std::vector<std::tuple<int, std::string, double>> loading_rows;
  // trait, mean loading of its questions
  std::vector<std::pair<std::string, double>> trait_mean_rows;
  int component = 0;  // basis row used for the loading table
};

// The loading table uses `component`, or, when negative, the component with
// the highest mean S for the basis method in the report.
FigureTables EmitFigureData(const EvaluationReport& report,
                            const ProjectionBasis& basis, const ScoringKey& key,
                            int component = -1);
void WriteImprovementTable(const FigureTables& tables, std::ostream& out);
void WriteLoadingTable(const FigureTables& tables, std::ostream& out);

}  // namespace phonetraits

#endif  // PHONETRAITS_PIPELINE_H_
