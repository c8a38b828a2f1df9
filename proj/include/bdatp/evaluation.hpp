#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdatp/pipeline.hpp"

namespace bdatp::eval {

// Desk-scale stand-in for the face-database experiments: a seeded synthetic
// benchmark with held-out genuine probes and cross-class imposter probes.
struct BenchmarkSpec {
  std::uint64_t seed = 1;
  std::uint32_t num_classes = 10;
  std::uint32_t samples_per_class = 10;  // training samples
  std::uint32_t probes_per_class = 5;    // held-out probes
  double class_center_scale = 1.0;
  double within_sigma = 0.15;
};

struct Histogram {
  std::vector<std::uint64_t> counts;  // index = score, size n_total + 1
  std::uint64_t total() const;
};

struct HistogramPair {
  Histogram genuine;
  Histogram imposter;
};

// Pairwise binary match scores of labeled templates: same-label pairs feed
// the genuine histogram, cross-label pairs the imposter one. Bin width 1
// over [0, n_total]. Needs at least two templates; a single label yields an
// empty imposter histogram.
HistogramPair make_histograms(
    const std::vector<std::pair<std::string, BitVec>>& labeled,
    std::uint32_t n_total);

struct ScoreRow {
  std::string probe_id;
  int feature_score = 0;     // [0, score_scale]
  int cancelable_score = 0;  // [0, score_scale]
  int binary_score = 0;      // [0, n_total]
  bool accepted = false;
  int errors_corrected = 0;  // summed over blocks, meaningful on accept
};

struct ScoreTable {
  std::vector<ScoreRow> rows;
  std::uint32_t score_scale = 0;
  std::uint32_t n_total = 0;
  // Normalized genuine means (real scores / scale, binary / n_total) and the
  // paper-style stage comparison: does the BDA stage beat the cancelable one?
  double mean_feature = 0;
  double mean_cancelable = 0;
  double mean_binary = 0;
  bool binary_beats_cancelable = false;
};

struct BenchmarkResult {
  BenchmarkSpec spec;
  StageConfig config;
  HistogramPair histograms;
  ScoreTable table;
  std::uint64_t genuine_trials = 0;
  std::uint64_t genuine_accepts = 0;
  std::uint64_t imposter_trials = 0;
  std::uint64_t imposter_accepts = 0;
  double genuine_accept_rate = 0;
  double imposter_accept_rate = 0;
};

// Deterministic in spec.seed. Enrolls every class through the production
// enroll path, runs genuine and imposter verifications through the
// production verify path, and derives histograms from per-class binarized
// templates.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec, const StageConfig& config);

struct TimingStats {
  std::uint64_t median_ns = 0;
  std::uint64_t min_ns = 0;
  std::uint64_t max_ns = 0;
};

struct TimingReport {
  std::uint32_t repetitions = 0;
  bool spread_defined = false;  // false when repetitions == 1
  TimingStats enroll_total, enroll_setup, enroll_project, enroll_train,
      enroll_commit;
  TimingStats verify_total, verify_setup, verify_project, verify_binarize,
      verify_commit;
  // sum of verify stage medians / verify total median; ~1 when the stage
  // clocks account for the whole operation.
  double verify_stage_consistency = 0;
};

TimingReport timing_report(const BenchmarkSpec& spec, const StageConfig& config,
                           std::uint32_t repetitions);

// Stage-wise security accounting. A stage template of length Kc costs the
// attacker 2^(Kc-1) brute-force trials; values are reported as bit counts,
// never expanded. Smart-attack (affine transformation) ratings are fixed:
// random projection Low, BDA High, fuzzy commitment High, full High.
struct SecurityStage {
  std::string stage;
  std::uint64_t kc = 0;
  std::uint64_t brute_force_bits = 0;  // kc - 1
  std::string brute_force_rating;      // always "High"
  std::string smart_attack_rating;
};

struct SecurityReport {
  std::string source;  // preset name, "explicit", or "config"
  std::vector<SecurityStage> stages;
};

// Presets: "paper-novel" carries the published stage lengths
// (random projection 3772, BDA 11340, fuzzy commitment 11340, full 6800).
SecurityReport security_report_preset(const std::string& name);
std::vector<std::string> security_presets();

// Explicit per-stage lengths; every Kc must be >= 1.
SecurityReport security_report_from_kc(std::uint64_t rp, std::uint64_t bda,
                                       std::uint64_t fc, std::uint64_t full);

// Derived from a stage config: rp = 64*k (bit length of the real template),
// bda = fc = n_total, full = n_total rounded up to whole bytes.
SecurityReport security_report_from_config(const StageConfig& config);

// Renderers. Text tables are aligned columns; JSON carries a versioned
// "schema" field and is what scripts should consume.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

std::string score_table_text(const ScoreTable& table);
nlohmann::json score_table_json(const ScoreTable& table);

std::string histogram_csv(const Histogram& histogram);
nlohmann::json histograms_json(const HistogramPair& histograms);

nlohmann::json timing_report_json(const TimingReport& report);
TimingReport timing_report_from_json(const nlohmann::json& j);

std::string security_report_text(const SecurityReport& report);
nlohmann::json security_report_json(const SecurityReport& report);

nlohmann::json benchmark_summary_json(const BenchmarkResult& result);

}  // namespace bdatp::eval
