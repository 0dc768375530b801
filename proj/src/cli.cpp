// Copyright 2026 The tsr Authors
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

#include "tsr/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsr/errors.h"
#include "tsr/eval.h"
#include "tsr/export.h"
#include "tsr/html.h"
#include "tsr/pipeline.h"
#include "tsr/serialize.h"
#include "tsr/synth.h"

namespace tsr {
namespace {

namespace fs = std::filesystem;

struct SharedFlags {
  std::string config;
  std::string classifier;
  std::string endpoint;
  std::string fallback;
  int pair_m = 0;
  int pair_n = 0;
  bool repair = false;
  int workers = 0;
  std::string out;

  CLI::Option* o_classifier = nullptr;
  CLI::Option* o_endpoint = nullptr;
  CLI::Option* o_fallback = nullptr;
  CLI::Option* o_pair_m = nullptr;
  CLI::Option* o_pair_n = nullptr;
  CLI::Option* o_repair = nullptr;
  CLI::Option* o_workers = nullptr;
  CLI::Option* o_out = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    o_classifier = app->add_option("--classifier", classifier, "oracle | heuristic | remote")
                       ->check(CLI::IsMember({"oracle", "heuristic", "remote"}));
    o_endpoint = app->add_option("--endpoint", endpoint, "classifier service URL");
    o_fallback = app->add_option("--fallback", fallback, "fail | heuristic")->check(CLI::IsMember({"fail", "heuristic"}));
    o_pair_m = app->add_option("--pair-m", pair_m, "top neighbours per word");
    o_pair_n = app->add_option("--pair-n", pair_n, "left neighbours per word");
    o_repair = app->add_flag("--repair", repair, "drop weakest inconsistent labels instead of failing");
    o_workers = app->add_option("--workers", workers, "tables processed in parallel");
    o_out = app->add_option("--out", out, "output directory");
  }

  // defaults < TSR_DSAW_ENDPOINT < config file < flags
  PipelineConfig resolve() const {
    PipelineConfig c;
    if (const char* env = std::getenv("TSR_DSAW_ENDPOINT")) c.remote_endpoint = env;
    if (!config.empty()) c = load_config_file(config, c);
    if (o_classifier->count()) c.classifier = classifier_from_string(classifier);
    if (o_endpoint->count()) c.remote_endpoint = endpoint;
    if (o_fallback->count()) c.fallback = fallback_from_string(fallback);
    if (o_pair_m->count()) c.pair_m = pair_m;
    if (o_pair_n->count()) c.pair_n = pair_n;
    if (o_repair->count()) c.repair = repair;
    if (o_workers->count()) c.workers = workers;
    if (o_out->count()) c.output_dir = out;
    c.validate();
    return c;
  }
};

struct InputFlags {
  std::string truth;
  std::string detections;
  std::string images;

  void attach(CLI::App* app) {
    app->add_option("--truth", truth, "PubTabNet .jsonl, ICDAR .xml, or a directory of them")->check(CLI::ExistingPath);
    app->add_option("--detections", detections, "detections .jsonl or a directory of <table_id>.jsonl")
        ->check(CLI::ExistingPath);
    app->add_option("--images", images, "directory of <table_id>.png")->check(CLI::ExistingDirectory);
  }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::vector<fs::path> files_in(const fs::path& path, std::initializer_list<const char*> extensions) {
  std::vector<fs::path> out;
  if (!fs::is_directory(path)) return {path};
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (std::any_of(extensions.begin(), extensions.end(), [&](const char* e) { return ext == e; })) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GroundTruthTable> load_truth(const std::string& path) {
  std::vector<GroundTruthTable> out;
  if (path.empty()) return out;
  for (const fs::path& file : files_in(path, {".jsonl", ".xml"})) {
    if (file.extension() == ".xml") {
      auto tables = parse_icdar_document(read_file(file), file.stem().string());
      out.insert(out.end(), tables.begin(), tables.end());
    } else {
      auto tables = load_pubtabnet_file(file);
      out.insert(out.end(), tables.begin(), tables.end());
    }
  }
  return out;
}

std::map<std::string, std::vector<WordBox>> load_detection_set(const std::string& path, double frame_size) {
  std::map<std::string, std::vector<WordBox>> out;
  if (path.empty()) return out;
  for (const fs::path& file : files_in(path, {".jsonl"})) {
    try {
      out[file.stem().string()] = load_detections(file, frame_size);
    } catch (const Error& e) {
      throw Error(file.string() + ": " + e.what());
    }
  }
  return out;
}

struct Workload {
  std::vector<GroundTruthTable> truth;
  std::vector<TableInput> inputs;
  std::map<std::string, const GroundTruthTable*> truth_by_id;
};

Workload assemble(const InputFlags& flags, const PipelineConfig& config) {
  if (flags.truth.empty() && flags.detections.empty()) throw ValidationError("give --detections and/or --truth");
  Workload w;
  w.truth = load_truth(flags.truth);
  for (const GroundTruthTable& t : w.truth) w.truth_by_id[t.table_id] = &t;
  const auto detections = load_detection_set(flags.detections, config.frame_size);
  if (!flags.detections.empty()) {
    const bool single = detections.size() == 1 && w.truth.size() == 1;
    for (const auto& [id, words] : detections) {
      const GroundTruthTable* truth = single ? &w.truth.front() : nullptr;
      if (auto it = w.truth_by_id.find(id); it != w.truth_by_id.end()) truth = it->second;
      w.inputs.push_back(make_table_input(id, truth, &words));
    }
  } else {
    for (const GroundTruthTable& t : w.truth) w.inputs.push_back(make_table_input(t.table_id, &t, nullptr));
  }
  if (config.classifier == ClassifierKind::kRemote && !flags.images.empty()) {
    for (TableInput& in : w.inputs) {
      const fs::path png = fs::path(flags.images) / (in.table_id + ".png");
      if (fs::exists(png)) in.image = read_png(png);
    }
  }
  return w;
}

void report_outcome(const TableOutcome& o, std::ostream& err) {
  if (!o.warning.empty()) err << "warning: table " << o.table_id << ": " << o.warning << '\n';
  if (!o.ok()) err << "error: table " << o.table_id << ": " << o.failed_stage << ": " << o.error << '\n';
}

std::vector<TableOutcome> run_all(const Workload& w, const PipelineConfig& config, StopAfter stop,
                                  const std::map<std::string, std::vector<LabeledPair>>* labels,
                                  const std::map<std::string, std::vector<WordPair>>* pairs) {
  std::vector<TableOutcome> outcomes(w.inputs.size());
  parallel_for(w.inputs.size(), config.workers, [&](std::size_t i) {
    const TableInput& in = w.inputs[i];
    const std::vector<LabeledPair>* given_labels = nullptr;
    const std::vector<WordPair>* given_pairs = nullptr;
    static const std::vector<LabeledPair> kNoLabels;
    static const std::vector<WordPair> kNoPairs;
    if (labels) {
      auto it = labels->find(in.table_id);
      given_labels = it == labels->end() ? &kNoLabels : &it->second;
    }
    if (pairs) {
      auto it = pairs->find(in.table_id);
      given_pairs = it == pairs->end() ? &kNoPairs : &it->second;
    }
    outcomes[i] = run_table(in, config, stop, given_labels, given_pairs);
  });
  return outcomes;
}

int cmd_reconstruct(const SharedFlags& shared, const InputFlags& inputs, const std::string& labels_file,
                    std::ostream& out, std::ostream& err) {
  const PipelineConfig config = shared.resolve();
  const Workload w = assemble(inputs, config);
  std::map<std::string, std::vector<LabeledPair>> labels;
  if (!labels_file.empty()) {
    std::ifstream in(labels_file);
    if (!in) throw Error("cannot open " + labels_file);
    labels = read_labels(in);
  }
  const auto outcomes = run_all(w, config, StopAfter::kReconstruction, labels_file.empty() ? nullptr : &labels, nullptr);
  fs::create_directories(config.output_dir);
  int failed = 0;
  std::vector<PredictedTable> preds;
  std::vector<TruthTable> truths;
  for (const TableOutcome& o : outcomes) {
    report_outcome(o, err);
    if (!o.ok()) {
      ++failed;
      preds.push_back({o.table_id, std::nullopt, o.failed_stage + ": " + o.error});
    } else {
      const Reconstruction& rec = *o.reconstruction;
      write_file(config.output_dir / (o.table_id + ".html"), rec.html() + "\n");
      write_file(config.output_dir / (o.table_id + ".json"), structure_to_json(o.table_id, rec.structure()) + "\n");
      preds.push_back({o.table_id, rec.structure(), ""});
    }
    if (auto it = w.truth_by_id.find(o.table_id); it != w.truth_by_id.end()) {
      truths.push_back({o.table_id, it->second->structure()});
    }
  }
  out << "reconstructed " << outcomes.size() - static_cast<std::size_t>(failed) << " of " << outcomes.size()
      << " tables into " << config.output_dir.string() << '\n';
  if (!truths.empty()) {
    const EvalReport report = evaluate_corpus(preds, truths);
    write_file(config.output_dir / "report.json", report_to_json(report) + "\n");
    out << report_summary(report);
  }
  return failed ? kExitTableFailed : kExitOk;
}

int cmd_pairgen(const SharedFlags& shared, const InputFlags& inputs, std::ostream& out, std::ostream& err) {
  const PipelineConfig config = shared.resolve();
  const Workload w = assemble(inputs, config);
  const auto outcomes = run_all(w, config, StopAfter::kPairs, nullptr, nullptr);
  fs::create_directories(config.output_dir);
  std::ofstream file(config.output_dir / "pairs.jsonl");
  std::size_t total = 0;
  int failed = 0;
  for (const TableOutcome& o : outcomes) {
    report_outcome(o, err);
    failed += o.ok() ? 0 : 1;
    write_pairs(file, o.table_id, o.pairs);
    total += o.pairs.size();
  }
  out << "wrote " << total << " pairs for " << outcomes.size() << " tables to "
      << (config.output_dir / "pairs.jsonl").string() << '\n';
  return failed ? kExitTableFailed : kExitOk;
}

int cmd_classify(const SharedFlags& shared, const InputFlags& inputs, const std::string& pairs_file,
                 std::ostream& out, std::ostream& err) {
  const PipelineConfig config = shared.resolve();
  const Workload w = assemble(inputs, config);
  std::map<std::string, std::vector<WordPair>> pairs;
  if (!pairs_file.empty()) {
    std::ifstream in(pairs_file);
    if (!in) throw Error("cannot open " + pairs_file);
    pairs = read_pairs(in);
  }
  const auto outcomes = run_all(w, config, StopAfter::kLabels, nullptr, pairs_file.empty() ? nullptr : &pairs);
  fs::create_directories(config.output_dir);
  std::ofstream file(config.output_dir / "labels.jsonl");
  std::map<RelationLabel, std::size_t> counts;
  int failed = 0;
  for (const TableOutcome& o : outcomes) {
    report_outcome(o, err);
    failed += o.ok() ? 0 : 1;
    write_labels(file, o.table_id, o.labels);
    for (const LabeledPair& lp : o.labels) ++counts[lp.label];
  }
  out << "labels:";
  for (RelationLabel l : kAllLabels) out << ' ' << to_wire(l) << '=' << counts[l];
  out << '\n';
  return failed ? kExitTableFailed : kExitOk;
}

int cmd_evaluate(const std::string& pred_dir, const std::string& truth_path, const std::string& out_dir,
                 std::ostream& out, std::ostream& err) {
  const auto truth = load_truth(truth_path);
  std::vector<TruthTable> truths;
  std::vector<PredictedTable> preds;
  std::vector<std::string> missing;
  for (const GroundTruthTable& t : truth) {
    truths.push_back({t.table_id, t.structure()});
    const fs::path html = fs::path(pred_dir) / (t.table_id + ".html");
    if (!fs::exists(html)) {
      missing.push_back(t.table_id);
      continue;
    }
    try {
      HtmlTable parsed = parse_html(read_file(html), HtmlParseOptions{true});
      preds.push_back({t.table_id, TableStructure{std::move(parsed.grid), std::move(parsed.texts), {}}, ""});
    } catch (const Error& e) {
      preds.push_back({t.table_id, std::nullopt, e.what()});
      err << "warning: " << html.string() << ": " << e.what() << '\n';
    }
  }
  const EvalReport report = evaluate_corpus(preds, truths);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "report.json", report_to_json(report) + "\n");
  }
  out << report_summary(report);
  if (!missing.empty()) {
    err << "error: missing predictions for:";
    for (const auto& id : missing) err << ' ' << id;
    err << '\n';
  }
  const bool corrupt = std::any_of(report.tables.begin(), report.tables.end(), [](const TableEval& t) { return t.corrupt; });
  return missing.empty() && !corrupt ? kExitOk : kExitMissingPreds;
}

int cmd_export(const std::string& truth_path, const std::string& images_dir, const ExportConfig& config,
               const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const auto truth = load_truth(truth_path);
  ImageLookup lookup = [&](const GroundTruthTable& t) -> std::optional<Image> {
    if (images_dir.empty()) return std::nullopt;
    const fs::path png = fs::path(images_dir) / (t.table_id + ".png");
    if (!fs::exists(png)) return std::nullopt;
    return read_png(png);
  };
  const ExportSummary summary = export_training_pairs(truth, lookup, out_dir, config);
  for (const auto& w : summary.warnings) err << "warning: " << w << '\n';
  out << summary_to_json(summary) << '\n';
  return kExitOk;
}

int cmd_synth(int count, std::uint64_t seed, int max_span, const std::string& out_dir, std::ostream& out) {
  SynthConfig config;
  config.max_span = max_span;
  const auto corpus = generate_corpus(seed, count, config);
  const fs::path root(out_dir);
  fs::create_directories(root / "detections");
  fs::create_directories(root / "images");
  std::ofstream truth(root / "truth.jsonl");
  for (const GroundTruthTable& t : corpus) {
    truth << to_pubtabnet_record(t) << '\n';
    write_file(root / "detections" / (t.table_id + ".jsonl"), to_detection_lines(t.word_boxes));
    write_png(render_table_image(t), root / "images" / (t.table_id + ".png"));
  }
  out << "wrote " << corpus.size() << " tables to " << root.string() << '\n';
  return kExitOk;
}

int cmd_patches(int width, int height, int patch_size, double overlap, std::ostream& out) {
  const PatchLayout layout = split_into_patches(width, height, patch_size, overlap);
  for (const Rect& p : layout.patches) {
    out << nlohmann::json{{"patch", {p.x_min, p.y_min, p.x_max, p.y_max}}}.dump() << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Table structure reconstruction from word boxes", "tsrtool"};
  app.require_subcommand(1);

  SharedFlags rec_shared, pg_shared, cl_shared;
  InputFlags rec_in, pg_in, cl_in;
  std::string labels_file, pairs_file;
  auto* rec = app.add_subcommand("reconstruct", "words -> pairs -> labels -> HTML grid per table");
  rec_shared.attach(rec);
  rec_in.attach(rec);
  rec->add_option("--labels", labels_file, "labels.jsonl from classify; skips pairgen and classify")
      ->check(CLI::ExistingFile);

  auto* pg = app.add_subcommand("pairgen", "write candidate word pairs as JSON lines");
  pg_shared.attach(pg);
  pg_in.attach(pg);

  auto* cl = app.add_subcommand("classify", "label word pairs and write them as JSON lines");
  cl_shared.attach(cl);
  cl_in.attach(cl);
  cl->add_option("--pairs", pairs_file, "pairs.jsonl from pairgen")->check(CLI::ExistingFile);

  std::string ev_pred, ev_truth, ev_out;
  auto* ev = app.add_subcommand("evaluate", "adjacency-relation precision/recall/F1 of <id>.html predictions");
  ev->add_option("--pred", ev_pred, "directory of <table_id>.html")->required()->check(CLI::ExistingDirectory);
  ev->add_option("--truth", ev_truth, "PubTabNet .jsonl, ICDAR .xml, or a directory")->required()->check(CLI::ExistingPath);
  ev->add_option("--out", ev_out, "directory for report.json");

  std::string ex_truth, ex_images, ex_out = "out";
  ExportConfig ex_config;
  auto* ex = app.add_subcommand("export-pairs", "render labelled pair images for classifier training");
  ex->add_option("--truth", ex_truth, "annotations with word boxes")->required()->check(CLI::ExistingPath);
  ex->add_option("--images", ex_images, "directory of <table_id>.png")->check(CLI::ExistingDirectory);
  ex->add_option("--balance", ex_config.balance, "fraction of hard cases")->check(CLI::Range(0.0, 1.0));
  ex->add_option("--seed", ex_config.seed, "sampling seed");
  ex->add_option("--nearest-k", ex_config.nearest_k, "extra nearest-word candidates per word");
  ex->add_option("--out", ex_out, "output directory");

  int sy_count = 10, sy_span = 3;
  std::uint64_t sy_seed = 1;
  std::string sy_out = "synth";
  auto* sy = app.add_subcommand("synth", "generate synthetic tables, detections and images");
  sy->add_option("--count", sy_count, "number of tables")->check(CLI::NonNegativeNumber);
  sy->add_option("--seed", sy_seed, "generator seed");
  sy->add_option("--max-span", sy_span, "largest row/column span (1 = span-free)")->check(CLI::Range(1, 8));
  sy->add_option("--out", sy_out, "output directory");

  int pa_w = 0, pa_h = 0, pa_size = kDefaultPatchSize;
  double pa_overlap = kDefaultPatchOverlap;
  auto* pa = app.add_subcommand("patches", "print the detection patch layout for an image size");
  pa->add_option("--width", pa_w, "image width")->required()->check(CLI::PositiveNumber);
  pa->add_option("--height", pa_h, "image height")->required()->check(CLI::PositiveNumber);
  pa->add_option("--patch-size", pa_size, "patch side in pixels")->check(CLI::PositiveNumber);
  pa->add_option("--overlap", pa_overlap, "overlap fraction")->check(CLI::Range(0.0, 0.99));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*rec) return cmd_reconstruct(rec_shared, rec_in, labels_file, out, err);
    if (*pg) return cmd_pairgen(pg_shared, pg_in, out, err);
    if (*cl) return cmd_classify(cl_shared, cl_in, pairs_file, out, err);
    if (*ev) return cmd_evaluate(ev_pred, ev_truth, ev_out, out, err);
    if (*ex) return cmd_export(ex_truth, ex_images, ex_config, ex_out, out, err);
    if (*sy) return cmd_synth(sy_count, sy_seed, sy_span, sy_out, out);
    if (*pa) return cmd_patches(pa_w, pa_h, pa_size, pa_overlap, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tsr
