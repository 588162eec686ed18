#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "quakescore/adjudication.hpp"
#include "quakescore/codec.hpp"
#include "quakescore/dataset.hpp"
#include "quakescore/error.hpp"
#include "quakescore/metrics.hpp"
#include "quakescore/parallel.hpp"
#include "quakescore/severity.hpp"

namespace quakescore::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct GlobalOptions {
  bool json = false;
  bool timestamp = false;
  std::size_t jobs = 1;
};

// Shortest decimal that round-trips, e.g. 0.65 rather than 0.65000000000000002.
std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json report_header(const GlobalOptions& g, const char* command) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  if (g.timestamp) j["generated_at"] = utc_now();
  return j;
}

json config_json(const ScoringConfig& cfg) {
  return json{{"ds_weight", cfg.ds_weight}, {"depth_floor", cfg.depth_floor}};
}

json iou_json(const IoUReport& r) {
  json per_class = json::object();
  for (DamageClass c : kAllClasses) {
    const auto v = r.iou(c);
    per_class[std::string(name(c))] = v ? json(*v) : json(nullptr);
  }
  return json{{"per_class", per_class},
              {"included_count", r.included_count},
              {"mean", r.mean}};
}

// ---------------------------------------------------------------- score

struct ScoreArgs {
  std::string mask;
  std::string depth;
  ScoringConfig cfg;
};

int cmd_score(const GlobalOptions& g, const ScoreArgs& a, std::ostream& out, std::ostream& err) {
  const SegMask mask = load_mask(a.mask);
  const DepthMap depth = load_depth(a.depth);
  if (!dims_match(mask, depth)) {
    err << "error: " << a.mask << " (" << mask.width() << "x" << mask.height()
        << ") and " << a.depth << " (" << depth.width() << "x" << depth.height()
        << ") differ in size\n";
    return kExitInputError;
  }

  SeverityScore score;
  try {
    score = score_image(mask, depth, a.cfg);
  } catch (const DomainError& e) {
    err << "error: " << a.mask << ": " << e.what() << "\n";
    return kExitUnassessable;
  }

  if (g.json) {
    json j = report_header(g, "score");
    j["mask"] = a.mask;
    j["depth"] = a.depth;
    j["score"] = score.value;
    j["assessable_pixels"] = score.assessable_pixels;
    j["config"] = config_json(a.cfg);
    out << j.dump(2) << "\n";
  } else {
    out << format_number(score.value) << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------- evaluate

int cmd_evaluate(const GlobalOptions& g, const std::string& manifest_path, std::ostream& out,
                 std::ostream& err) {
  const Manifest manifest = load_manifest(manifest_path);
  for (const auto& w : manifest.warnings) err << "warning: " << w << "\n";

  struct Outcome {
    std::optional<IoUReport> report;
    std::string error;
  };
  const auto& entries = manifest.entries;
  std::vector<Outcome> outcomes(entries.size());
  parallel_for(entries.size(), g.jobs, [&](std::size_t i) {
    const ManifestEntry& e = entries[i];
    try {
      if (!e.mask) throw InputError("missing mask");
      if (!e.pred_mask) throw InputError("missing pred_mask");
      outcomes[i].report = mean_iou(load_mask(*e.mask), load_mask(*e.pred_mask));
    } catch (const Error& ex) {
      outcomes[i].error = ex.what();
    }
  });

  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return entries[x].id < entries[y].id; });

  std::size_t failed = 0;
  double sum = 0.0;
  std::size_t evaluated = 0;
  json rows = json::array();
  for (std::size_t i : order) {
    json row{{"id", entries[i].id}};
    if (outcomes[i].report) {
      row.update(iou_json(*outcomes[i].report));
      sum += outcomes[i].report->mean;
      ++evaluated;
    } else {
      row["error"] = outcomes[i].error;
      ++failed;
      err << "error: entry '" << entries[i].id << "': " << outcomes[i].error << "\n";
    }
    rows.push_back(std::move(row));
  }
  const double dataset_mean = evaluated > 0 ? sum / static_cast<double>(evaluated) : 0.0;

  if (g.json) {
    json j = report_header(g, "evaluate");
    j["manifest"] = manifest_path;
    j["entries"] = std::move(rows);
    j["evaluated"] = evaluated;
    j["failed"] = failed;
    j["dataset_mean_iou"] = evaluated > 0 ? json(dataset_mean) : json(nullptr);
    out << j.dump(2) << "\n";
  } else {
    for (const auto& row : rows) {
      out << row["id"].get<std::string>() << "\t";
      if (row.contains("error")) {
        out << "error\n";
      } else {
        out << format_number(row["mean"].get<double>()) << "\n";
      }
    }
    out << "dataset_mean_iou\t" << (evaluated > 0 ? format_number(dataset_mean) : "n/a") << "\n";
  }
  return failed == 0 ? kExitOk : kExitInputError;
}

// ---------------------------------------------------------------- merge

int cmd_merge(const GlobalOptions& g, const std::string& a_path, const std::string& b_path,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  const SegMask a = load_mask(a_path);
  const SegMask b = load_mask(b_path);
  if (!dims_match(a, b)) {
    err << "error: " << a_path << " (" << a.width() << "x" << a.height() << ") and " << b_path
        << " (" << b.width() << "x" << b.height() << ") differ in size\n";
    return kExitInputError;
  }
  const SegMask merged = merge_conservative(a, b);
  save_mask(merged, out_path);

  if (g.json) {
    json j = report_header(g, "merge");
    j["inputs"] = {a_path, b_path};
    j["output"] = out_path;
    j["agreement"] = iou_json(agreement_report(a, b));
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- stats

int cmd_stats(const GlobalOptions& g, const std::string& manifest_path, std::ostream& out,
              std::ostream& err) {
  const Manifest manifest = load_manifest(manifest_path);
  for (const auto& w : manifest.warnings) err << "warning: " << w << "\n";
  const auto& entries = manifest.entries;

  std::vector<ClassHistogram> per_entry(entries.size());
  std::vector<std::vector<std::string>> violations(entries.size());
  parallel_for(entries.size(), g.jobs, [&](std::size_t i) {
    violations[i] = validate_entry(entries[i]);
    if (!entries[i].mask) return;
    try {
      const SegMask mask = load_mask(*entries[i].mask);
      per_entry[i] = class_histogram(std::span<const SegMask>(&mask, 1));
    } catch (const Error&) {
      // Already reported by validate_entry().
    }
  });

  ClassHistogram hist;
  for (const auto& h : per_entry) {
    for (std::size_t c = 0; c < kNumClasses; ++c) hist.counts[c] += h.counts[c];
  }
  std::map<std::string, std::size_t> labels;
  for (SeverityLabel l : kAllLabels) labels[std::string(name(l))] = 0;
  std::size_t unlabeled = 0;
  for (const auto& e : entries) {
    if (e.label) {
      ++labels[std::string(name(*e.label))];
    } else {
      ++unlabeled;
    }
  }

  std::size_t invalid = 0;
  json problems = json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (violations[i].empty()) continue;
    ++invalid;
    problems.push_back(json{{"id", entries[i].id}, {"violations", violations[i]}});
    for (const auto& v : violations[i]) {
      err << "error: entry '" << entries[i].id << "': " << v << "\n";
    }
  }

  const std::uint64_t total = hist.total();
  if (g.json) {
    json j = report_header(g, "stats");
    j["manifest"] = manifest_path;
    j["entries"] = entries.size();
    json counts = json::object();
    json fractions = json::object();
    for (DamageClass c : kAllClasses) {
      counts[std::string(name(c))] = hist[c];
      fractions[std::string(name(c))] =
          total > 0 ? json(static_cast<double>(hist[c]) / static_cast<double>(total))
                    : json(nullptr);
    }
    j["pixel_counts"] = counts;
    j["pixel_fractions"] = fractions;
    j["total_pixels"] = total;
    json label_counts(labels);
    label_counts["unlabeled"] = unlabeled;
    j["labels"] = label_counts;
    j["invalid_entries"] = problems;
    out << j.dump(2) << "\n";
  } else {
    out << "entries\t" << entries.size() << "\n";
    for (DamageClass c : kAllClasses) out << name(c) << "\t" << hist[c] << "\n";
    out << "total_pixels\t" << total << "\n";
    for (const auto& [label, n] : labels) out << "label:" << label << "\t" << n << "\n";
    out << "label:unlabeled\t" << unlabeled << "\n";
    out << "invalid_entries\t" << invalid << "\n";
  }
  return invalid == 0 ? kExitOk : kExitInputError;
}

// ---------------------------------------------------------------- split

struct SplitArgs {
  std::string manifest;
  double ratio = 0.8;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int cmd_split(const GlobalOptions& g, const SplitArgs& a, std::ostream& out, std::ostream& err) {
  const Manifest manifest = load_manifest(a.manifest);
  for (const auto& w : manifest.warnings) err << "warning: " << w << "\n";

  const DatasetSplit split = split_dataset(manifest.entries, a.ratio, a.seed);
  const fs::path manifest_path(a.manifest);
  const fs::path dir = a.out_dir.empty() ? manifest_path.parent_path() : fs::path(a.out_dir);
  if (!dir.empty()) fs::create_directories(dir);
  const std::string stem = manifest_path.stem().string();
  const fs::path train_path = dir / (stem + ".train.jsonl");
  const fs::path val_path = dir / (stem + ".val.jsonl");
  write_manifest(split.train, train_path);
  write_manifest(split.val, val_path);

  if (g.json) {
    json j = report_header(g, "split");
    j["manifest"] = a.manifest;
    j["ratio"] = a.ratio;
    j["seed"] = a.seed;
    j["train"] = {{"path", train_path.string()}, {"count", split.train.size()}};
    j["val"] = {{"path", val_path.string()}, {"count", split.val.size()}};
    out << j.dump(2) << "\n";
  } else {
    out << "train\t" << split.train.size() << "\t" << train_path.string() << "\n";
    out << "val\t" << split.val.size() << "\t" << val_path.string() << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------ benchmark

int cmd_benchmark(const GlobalOptions& g, const std::string& manifest_path,
                  const ScoringConfig& cfg, std::ostream& out, std::ostream& err) {
  const Manifest manifest = load_manifest(manifest_path);
  for (const auto& w : manifest.warnings) err << "warning: " << w << "\n";

  const BenchmarkReport report = benchmark_grouped_scores(manifest.entries, cfg, g.jobs);
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";

  if (g.json) {
    json j = report_header(g, "benchmark");
    j["manifest"] = manifest_path;
    j["config"] = config_json(cfg);
    json groups = json::object();
    for (SeverityLabel l : kAllLabels) {
      const GroupScore& s = report.groups.at(l);
      groups[std::string(name(l))] = {{"mean_score", s.mean_score}, {"n", s.n}};
    }
    j["groups"] = groups;
    j["ordering_ok"] = report.ordering_ok;
    json rows = json::array();
    for (const EntryScore& e : report.entries) {
      rows.push_back({{"id", e.id},
                      {"label", std::string(name(e.label))},
                      {"score", e.score ? json(*e.score) : json(nullptr)},
                      {"assessable_pixels", e.assessable_pixels}});
    }
    j["entries"] = rows;
    j["warnings"] = report.warnings;
    out << j.dump(2) << "\n";
  } else {
    for (SeverityLabel l : kAllLabels) {
      const GroupScore& s = report.groups.at(l);
      out << name(l) << "\t" << format_number(s.mean_score) << "\t" << s.n << "\n";
    }
    out << "ordering_ok\t" << (report.ordering_ok ? "true" : "false") << "\n";
  }
  return kExitOk;
}

void add_scoring_flags(CLI::App& cmd, ScoringConfig& cfg) {
  cmd.add_option("--ds-weight", cfg.ds_weight, "Weight of a damaged-structure pixel")
      ->capture_default_str();
  cmd.add_option("--depth-floor", cfg.depth_floor, "Lower end of the depth normalization")
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depth-weighted earthquake damage scoring from segmentation masks", "quakescore"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_flag("--json", g.json, "Emit machine-readable JSON reports");
  app.add_flag("--timestamp", g.timestamp, "Add a generated_at field to JSON reports");
  app.add_option("--jobs", g.jobs, "Worker threads for per-entry work (0 = all cores)")
      ->capture_default_str();

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Damage severity score of one image");
  score_cmd->add_option("--mask", score.mask, "Segmentation mask PNG")->required();
  score_cmd->add_option("--depth", score.depth, "16-bit relative depth PNG")->required();
  add_scoring_flags(*score_cmd, score.cfg);

  std::string evaluate_manifest;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Per-image and dataset mean IoU");
  evaluate_cmd->add_option("manifest", evaluate_manifest, "JSON Lines manifest")->required();

  std::string merge_a, merge_b, merge_out;
  auto* merge_cmd = app.add_subcommand("merge", "Conservative merge of two annotator masks");
  merge_cmd->add_option("a", merge_a, "First annotator mask")->required();
  merge_cmd->add_option("b", merge_b, "Second annotator mask")->required();
  merge_cmd->add_option("out", merge_out, "Merged mask output path")->required();

  std::string stats_manifest;
  auto* stats_cmd = app.add_subcommand("stats", "Class histogram and manifest validation");
  stats_cmd->add_option("manifest", stats_manifest, "JSON Lines manifest")->required();

  SplitArgs split;
  auto* split_cmd = app.add_subcommand("split", "Deterministic train/validation split");
  split_cmd->add_option("manifest", split.manifest, "JSON Lines manifest")->required();
  split_cmd->add_option("--ratio", split.ratio, "Training fraction in (0, 1]")
      ->capture_default_str();
  split_cmd->add_option("--seed", split.seed, "Shuffle seed")->capture_default_str();
  split_cmd->add_option("--out-dir", split.out_dir,
                        "Directory for <stem>.train.jsonl and <stem>.val.jsonl");

  std::string benchmark_manifest;
  ScoringConfig benchmark_cfg;
  auto* benchmark_cmd =
      app.add_subcommand("benchmark", "Mean damage score per severity label");
  benchmark_cmd->add_option("manifest", benchmark_manifest, "JSON Lines manifest")->required();
  add_scoring_flags(*benchmark_cmd, benchmark_cfg);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*score_cmd) return cmd_score(g, score, out, err);
    if (*evaluate_cmd) return cmd_evaluate(g, evaluate_manifest, out, err);
    if (*merge_cmd) return cmd_merge(g, merge_a, merge_b, merge_out, out, err);
    if (*stats_cmd) return cmd_stats(g, stats_manifest, out, err);
    if (*split_cmd) return cmd_split(g, split, out, err);
    if (*benchmark_cmd) return cmd_benchmark(g, benchmark_manifest, benchmark_cfg, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnassessable;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace quakescore::cli
