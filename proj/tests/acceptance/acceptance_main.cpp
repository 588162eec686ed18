// Acceptance suite: one line per criterion, exit status 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "json.hpp"
#include "png_fixtures.hpp"
#include "quakescore/adjudication.hpp"
#include "quakescore/codec.hpp"
#include "quakescore/dataset.hpp"
#include "quakescore/error.hpp"
#include "quakescore/metrics.hpp"
#include "quakescore/severity.hpp"
#include "test_support.hpp"

namespace qs = quakescore;
namespace qt = quakescore::testing;
using qs::DamageClass;

namespace {

constexpr auto BG = DamageClass::Background;
constexpr auto US = DamageClass::Undamaged;
constexpr auto DS = DamageClass::Damaged;
constexpr auto DB = DamageClass::Debris;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// ------------------------------------------------------------------------
// Damage score equals a naive term-by-term evaluation on 1000 random
// instances up to 64x64, relative error <= 1e-9, total runtime < 10 s.
Outcome score_oracle_equivalence() {
  constexpr int kInstances = 1000;
  constexpr double kRelTol = 1e-9;
  constexpr double kMaxSeconds = 10.0;

  Outcome out;
  qt::Rng rng(1001);
  std::uniform_int_distribution<std::size_t> side(1, 64);
  double worst = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < kInstances; ++i) {
    const std::size_t w = side(rng), h = side(rng);
    const qs::SegMask mask = qt::random_assessable_mask(rng, w, h);
    const qs::NormalizedDepth depth = qt::random_normalized(rng, w, h);
    const double got = qs::damage_score(mask, depth).value;
    const double want = qt::naive_damage_score(mask, depth, 0.65);
    const double rel = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
    worst = std::max(worst, rel);
    if (rel > kRelTol) out.fail("instance " + std::to_string(i) + " rel err " + fmt(rel));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds >= kMaxSeconds) out.fail("runtime " + fmt(seconds) + " s");
  if (out.pass) out.detail = "worst rel err " + fmt(worst) + ", " + fmt(seconds) + " s";
  return out;
}

// ------------------------------------------------------------------------
// all-Debris -> 1.0, all-DS -> ds_weight, all-US -> 0.0 exactly, and
// all-Background -> domain error, each for 3 random depth maps.
Outcome closed_form_anchors() {
  Outcome out;
  qt::Rng rng(1002);
  const qs::ScoringConfig cfg;
  for (int i = 0; i < 3; ++i) {
    const std::size_t w = 1 + rng() % 48, h = 1 + rng() % 48;
    const qs::DepthMap raw = qt::random_depth(rng, w, h);
    if (qs::score_image(qs::SegMask(w, h, DB), raw, cfg).value != 1.0) out.fail("all-Debris != 1");
    if (qs::score_image(qs::SegMask(w, h, DS), raw, cfg).value != cfg.ds_weight)
      out.fail("all-DS != ds_weight");
    if (qs::score_image(qs::SegMask(w, h, US), raw, cfg).value != 0.0) out.fail("all-US != 0");
    try {
      qs::score_image(qs::SegMask(w, h, BG), raw, cfg);
      out.fail("all-Background did not raise");
    } catch (const qs::DomainError&) {
    }
  }
  if (out.pass) out.detail = "3 depth maps x 4 anchors";
  return out;
}

// ------------------------------------------------------------------------
// 500 single-pixel upgrades never decrease the score; 500
// Background->Undamaged conversions never increase it.
Outcome monotonicity() {
  constexpr int kTrials = 500;
  Outcome out;
  qt::Rng rng(1003);
  const std::pair<DamageClass, DamageClass> upgrades[] = {{US, DS}, {DS, DB}, {US, DB}};

  int upgrades_done = 0;
  while (upgrades_done < kTrials) {
    const std::size_t w = 1 + rng() % 32, h = 1 + rng() % 32;
    qs::SegMask mask = qt::random_mask(rng, w, h);
    const auto [from, to] = upgrades[upgrades_done % 3];
    std::vector<std::size_t> candidates;
    for (std::size_t p = 0; p < mask.pixel_count(); ++p)
      if (mask[p] == from) candidates.push_back(p);
    if (candidates.empty()) continue;
    const qs::NormalizedDepth d = qt::random_normalized(rng, w, h);
    const double before = qs::damage_score(mask, d).value;
    mask[candidates[rng() % candidates.size()]] = to;
    if (qs::damage_score(mask, d).value < before) out.fail("upgrade decreased score");
    ++upgrades_done;
  }

  int conversions = 0;
  while (conversions < kTrials) {
    const std::size_t w = 1 + rng() % 32, h = 1 + rng() % 32;
    qs::SegMask mask = qt::random_mask(rng, w, h);
    std::vector<std::size_t> bg;
    bool assessable = false;
    for (std::size_t p = 0; p < mask.pixel_count(); ++p) {
      if (mask[p] == BG) bg.push_back(p);
      assessable |= mask[p] != BG;
    }
    if (bg.empty() || !assessable) continue;
    const qs::NormalizedDepth d = qt::random_normalized(rng, w, h);
    const double before = qs::damage_score(mask, d).value;
    mask[bg[rng() % bg.size()]] = US;
    if (qs::damage_score(mask, d).value > before) out.fail("Background->US increased score");
    ++conversions;
  }
  if (out.pass) out.detail = "500 upgrades, 500 conversions";
  return out;
}

// ------------------------------------------------------------------------
// 100 random raw-depth affine maps (a > 0, b) move the score by <= 1e-12;
// Background padding inside the raw range moves it by exactly 0.
Outcome depth_invariances() {
  constexpr double kAffineTol = 1e-12;
  Outcome out;
  qt::Rng rng(1004);
  std::uniform_real_distribution<double> scale(0.01, 100.0), shift(0.0, 1000.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t w = 1 + rng() % 48, h = 1 + rng() % 48;
    const qs::SegMask mask = qt::random_assessable_mask(rng, w, h);
    const qs::DepthMap raw = qt::random_depth(rng, w, h);
    const double a = scale(rng), b = shift(rng);
    std::vector<double> moved;
    for (double v : raw.values()) moved.push_back(a * v + b);
    const double delta = std::abs(qs::score_image(mask, qs::DepthMap(w, h, moved)).value -
                                  qs::score_image(mask, raw).value);
    worst = std::max(worst, delta);
    if (delta > kAffineTol) out.fail("affine delta " + fmt(delta));
  }

  for (int i = 0; i < 100; ++i) {
    const std::size_t w = 1 + rng() % 32, h = 1 + rng() % 32, extra = 1 + rng() % 16;
    const qs::SegMask mask = qt::random_assessable_mask(rng, w, h);
    const qs::DepthMap raw = qt::random_depth(rng, w, h);
    const auto [lo, hi] = std::minmax_element(raw.values().begin(), raw.values().end());
    std::uniform_real_distribution<double> within(*lo, *hi);
    std::vector<DamageClass> classes(mask.classes().begin(), mask.classes().end());
    std::vector<double> depth(raw.values().begin(), raw.values().end());
    for (std::size_t k = 0; k < w * extra; ++k) {
      classes.push_back(BG);
      depth.push_back(within(rng));
    }
    const double padded =
        qs::score_image(qs::SegMask(w, h + extra, classes), qs::DepthMap(w, h + extra, depth))
            .value;
    if (padded != qs::score_image(mask, raw).value) out.fail("padding changed the score");
  }
  if (out.pass) out.detail = "worst affine delta " + fmt(worst) + ", padding exact";
  return out;
}

// ------------------------------------------------------------------------
// IoU: brute-force equality on 500 random pairs up to 32x32 (exact),
// symmetry, self mean 1.0, and the 2x2 example at 2/3 within 1e-12.
Outcome iou_suite() {
  Outcome out;
  qt::Rng rng(1005);
  for (int i = 0; i < 500; ++i) {
    const qs::SegMask a = qt::random_mask(rng, 32);
    const qs::SegMask b = qt::random_mask(rng, a.width(), a.height());
    for (DamageClass c : qs::kAllClasses) {
      const auto o = qt::naive_set_iou(a, b, c);
      const auto got = qs::class_iou(a, b, c);
      const std::optional<double> want =
          o.union_ == 0 ? std::nullopt
                        : std::optional<double>(double(o.intersection) / double(o.union_));
      if (got != want) out.fail("oracle mismatch at pair " + std::to_string(i));
      if (qs::class_iou(b, a, c) != got) out.fail("asymmetry at pair " + std::to_string(i));
    }
    if (qs::mean_iou(a, a).mean != 1.0) out.fail("self IoU != 1");
  }
  const qs::IoUReport r =
      qs::mean_iou(qs::SegMask(2, 2, {US, US, DS, BG}), qs::SegMask(2, 2, {US, DS, DS, BG}));
  if (std::abs(r.mean - 2.0 / 3.0) > 1e-12) out.fail("2x2 example gave " + fmt(r.mean));
  if (out.pass) out.detail = "500 pairs exact";
  return out;
}

// ------------------------------------------------------------------------
// Merge is commutative, associative and idempotent over all 16 class pairs
// and 200 random mask triples; merged score dominates on 200 random pairs.
Outcome merge_semilattice() {
  Outcome out;
  const auto px = [](DamageClass c) { return qs::SegMask(1, 1, c); };
  for (DamageClass a : qs::kAllClasses) {
    if (qs::merge_conservative(px(a), px(a)) != px(a)) out.fail("not idempotent");
    for (DamageClass b : qs::kAllClasses) {
      const qs::SegMask ab = qs::merge_conservative(px(a), px(b));
      if (ab != qs::merge_conservative(px(b), px(a))) out.fail("not commutative");
      if (ab[0] != std::max(a, b)) out.fail("not the higher damage degree");
      for (DamageClass c : qs::kAllClasses) {
        if (qs::merge_conservative(ab, px(c)) !=
            qs::merge_conservative(px(a), qs::merge_conservative(px(b), px(c))))
          out.fail("not associative");
      }
    }
  }

  qt::Rng rng(1006);
  for (int i = 0; i < 200; ++i) {
    const qs::SegMask a = qt::random_mask(rng, 32);
    const qs::SegMask b = qt::random_mask(rng, a.width(), a.height());
    const qs::SegMask c = qt::random_mask(rng, a.width(), a.height());
    const qs::SegMask ab = qs::merge_conservative(a, b);
    if (ab != qs::merge_conservative(b, a)) out.fail("random: not commutative");
    if (qs::merge_conservative(ab, c) != qs::merge_conservative(a, qs::merge_conservative(b, c)))
      out.fail("random: not associative");
    if (qs::merge_conservative(a, a) != a) out.fail("random: not idempotent");
  }

  for (int i = 0; i < 200; ++i) {
    const std::size_t w = 1 + rng() % 32, h = 1 + rng() % 32;
    const qs::SegMask a = qt::random_assessable_mask(rng, w, h);
    const qs::SegMask b = qt::random_assessable_mask(rng, w, h);
    const qs::NormalizedDepth d = qt::random_normalized(rng, w, h);
    const double merged = qs::damage_score(qs::merge_conservative(a, b), d).value;
    const double best = std::max(qs::damage_score(a, d).value, qs::damage_score(b, d).value);
    if (merged < best) {
      out.fail("score dominance violated at random pair " + std::to_string(i) + " (merged " +
               fmt(merged) + " < " + fmt(best) +
               "); minimal case: [Debris,Background] + [Background,Undamaged] scores 1 -> 0.5");
    }
  }
  if (out.pass) out.detail = "16 pairs, 200 triples, 200 dominance pairs";
  return out;
}

// ------------------------------------------------------------------------
// Mask and depth files round-trip bit-exact for 100 random instances;
// non-canonical colors are rejected with pixel coordinates.
Outcome codec_round_trips() {
  Outcome out;
  qt::TempDir dir;
  qt::Rng rng(1007);
  std::uniform_int_distribution<std::size_t> side(1, 64);
  for (int i = 0; i < 100; ++i) {
    const qs::SegMask m = qt::random_mask(rng, 64);
    qs::save_mask(m, dir / "m.png");
    if (qs::load_mask(dir / "m.png") != m) out.fail("mask round trip " + std::to_string(i));
    const qs::DepthMap d = qt::random_depth_samples(rng, side(rng), side(rng));
    qs::save_depth(d, dir / "d.png");
    if (qs::load_depth(dir / "d.png") != d) out.fail("depth round trip " + std::to_string(i));
  }

  // A grey pixel at (2,1) in an otherwise canonical RGB mask.
  std::vector<std::uint8_t> rgb(4 * 3 * 3, 0);
  rgb[(1 * 4 + 2) * 3 + 0] = 128;
  rgb[(1 * 4 + 2) * 3 + 1] = 128;
  rgb[(1 * 4 + 2) * 3 + 2] = 128;
  qt::write_rgb_png(dir / "bad.png", 4, 3, rgb);
  try {
    qs::load_mask(dir / "bad.png");
    out.fail("non-canonical color accepted");
  } catch (const qs::InputError& e) {
    if (std::string(e.what()).find("unknown class color at (2,1)") == std::string::npos)
      out.fail(std::string("message lacks coordinates: ") + e.what());
  }
  if (out.pass) out.detail = "100 masks, 100 depth maps";
  return out;
}

// ------------------------------------------------------------------------
// 547 entries at ratio 0.8 with a fixed seed give 437/110, identical over
// 5 runs.
Outcome split_determinism() {
  Outcome out;
  std::vector<qs::ManifestEntry> entries(547);
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].id = "img" + std::to_string(i);
  const qs::DatasetSplit first = qs::split_dataset(entries, 0.8, 20240101);
  if (first.train.size() != 437 || first.val.size() != 110) {
    out.fail("sizes " + std::to_string(first.train.size()) + "/" +
             std::to_string(first.val.size()));
  }
  for (int run = 0; run < 5; ++run) {
    const qs::DatasetSplit again = qs::split_dataset(entries, 0.8, 20240101);
    if (again.train != first.train || again.val != first.val) out.fail("run differs");
  }
  if (out.pass) out.detail = "437/110 x5";
  return out;
}

// ------------------------------------------------------------------------
// Degenerate fixture groups give means {0.0, 0.65, 1.0} and
// ordering_ok: true in the benchmark report.
Outcome benchmark_shape() {
  Outcome out;
  qt::TempDir dir;
  qs::save_depth(qt::uniform_depth(8, 8, 500.0), dir / "flat.png");
  qs::save_mask(qs::SegMask(8, 8, US), dir / "us.png");
  qs::save_mask(qs::SegMask(8, 8, DS), dir / "ds.png");
  qs::save_mask(qs::SegMask(8, 8, DB), dir / "db.png");
  std::string manifest;
  const std::pair<const char*, const char*> groups[] = {
      {"little_to_no", "us.png"}, {"mild", "ds.png"}, {"severe", "db.png"}};
  for (const auto& [label, file] : groups) {
    for (int i = 0; i < 2; ++i) {
      manifest += std::string("{\"id\":\"") + label + std::to_string(i) + "\",\"mask\":\"" +
                  file + "\",\"depth\":\"flat.png\",\"label\":\"" + label + "\"}\n";
    }
  }
  qt::write_text(dir / "bench.jsonl", manifest);

  std::ostringstream report, diagnostics;
  const int code = quakescore::cli::run({"--json", "benchmark", (dir / "bench.jsonl").string()},
                                        report, diagnostics);
  if (code != 0) {
    out.fail("exit " + std::to_string(code) + ": " + diagnostics.str());
    return out;
  }
  const auto j = nlohmann::json::parse(report.str());
  if (j["groups"]["little_to_no"]["mean_score"] != 0.0) out.fail("little_to_no mean");
  if (j["groups"]["mild"]["mean_score"] != 0.65) out.fail("mild mean");
  if (j["groups"]["severe"]["mean_score"] != 1.0) out.fail("severe mean");
  if (j["ordering_ok"] != true) out.fail("ordering_ok false");
  if (out.pass) out.detail = "means {0, 0.65, 1}, ordering_ok true";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"damage score matches naive evaluation (1000 instances, rel 1e-9, <10 s)",
       score_oracle_equivalence},
      {"closed-form anchors (Debris 1, DS ds_weight, US 0, Background error)",
       closed_form_anchors},
      {"pixel monotonicity (500 upgrades, 500 Background->US)", monotonicity},
      {"depth invariances (affine <= 1e-12, background padding exact)", depth_invariances},
      {"IoU suite (500 brute-force pairs, symmetry, self, 2x2 = 2/3)", iou_suite},
      {"merge semilattice and score dominance", merge_semilattice},
      {"codec round trips and non-canonical rejection", codec_round_trips},
      {"split determinism (547 -> 437/110, 5 runs)", split_determinism},
      {"benchmark shape (means 0 / 0.65 / 1, ordering_ok)", benchmark_shape},
  };

  int failed = 0;
  for (const auto& [title, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << title;
    if (!o.detail.empty()) std::cout << " -- " << o.detail;
    std::cout << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
