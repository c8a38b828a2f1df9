#include "bdatp/evaluation.hpp"

#include <algorithm>
#include <set>

#include "bdatp/randproj.hpp"
#include "bdatp/rng.hpp"

namespace bdatp::eval {

namespace {

using nlohmann::json;

struct EnrolledClass {
  std::string label;
  TemplateRecord record;
  BitVec committed_template;
  ProjectionKey key;
  std::vector<double> feature_centroid;
  std::vector<double> projected_centroid;
};

TimingStats stats_of(std::vector<std::uint64_t> samples) {
  std::sort(samples.begin(), samples.end());
  TimingStats s;
  s.min_ns = samples.front();
  s.max_ns = samples.back();
  s.median_ns = samples[samples.size() / 2];
  return s;
}

json stats_json(const TimingStats& s) {
  return json{{"median_ns", s.median_ns}, {"min_ns", s.min_ns}, {"max_ns", s.max_ns}};
}

TimingStats stats_from_json(const json& j) {
  TimingStats s;
  s.median_ns = j.at("median_ns").get<std::uint64_t>();
  s.min_ns = j.at("min_ns").get<std::uint64_t>();
  s.max_ns = j.at("max_ns").get<std::uint64_t>();
  return s;
}

SecurityStage make_stage(const std::string& name, std::uint64_t kc,
                         const std::string& smart_rating) {
  if (kc < 1) throw InvalidArgument("security report: Kc must be >= 1");
  return SecurityStage{name, kc, kc - 1, "High", smart_rating};
}

SecurityReport assemble_report(const std::string& source, std::uint64_t rp,
                               std::uint64_t bda, std::uint64_t fc,
                               std::uint64_t full) {
  SecurityReport report;
  report.source = source;
  report.stages = {
      make_stage("random_projection", rp, "Low"),
      make_stage("bda", bda, "High"),
      make_stage("fuzzy_commitment", fc, "High"),
      make_stage("full_algorithm", full, "High"),
  };
  return report;
}

}  // namespace

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

HistogramPair make_histograms(
    const std::vector<std::pair<std::string, BitVec>>& labeled,
    std::uint32_t n_total) {
  if (labeled.size() < 2)
    throw InvalidArgument("make_histograms: need at least two templates");
  HistogramPair out;
  out.genuine.counts.assign(n_total + 1, 0);
  out.imposter.counts.assign(n_total + 1, 0);
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    for (std::size_t j = i + 1; j < labeled.size(); ++j) {
      int score = binary_match_score(labeled[i].second, labeled[j].second);
      if (score < 0 || score > static_cast<int>(n_total))
        throw InvalidArgument("make_histograms: template length mismatch");
      auto& hist =
          labeled[i].first == labeled[j].first ? out.genuine : out.imposter;
      ++hist.counts[static_cast<std::size_t>(score)];
    }
  }
  return out;
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec,
                              const StageConfig& config) {
  config.validate();
  if (spec.num_classes < 2 || spec.samples_per_class < 2 ||
      spec.probes_per_class < 1)
    throw InvalidArgument(
        "run_benchmark: need >= 2 classes, >= 2 samples and >= 1 probe per class");

  // Seed derivation order: dataset, targets, then (projection, commitment)
  // per class.
  SeededRng master(spec.seed);
  std::uint64_t dataset_seed = master.next_u64();
  std::uint64_t targets_seed = master.next_u64();
  std::vector<EnrollSeeds> class_seeds(spec.num_classes);
  for (auto& s : class_seeds) {
    s.projection = master.next_u64();
    s.commitment = master.next_u64();
    s.targets = targets_seed;
  }

  SynthSpec synth;
  synth.seed = dataset_seed;
  synth.num_classes = spec.num_classes;
  synth.samples_per_class = spec.samples_per_class + spec.probes_per_class;
  synth.dim = config.d;
  synth.class_center_scale = spec.class_center_scale;
  synth.within_sigma = spec.within_sigma;
  auto dataset = synth_classes(synth);

  CodeParams params = build_code(static_cast<int>(config.code_m),
                                 static_cast<int>(config.code_t));
  std::size_t message_bits = std::size_t(params.k_msg) * config.blocks;

  // Distinct targets across classes, same mechanism as the store registry.
  SeededRng target_rng(target_message_seed(targets_seed));
  std::set<std::string> taken;
  auto next_free_message = [&]() {
    while (true) {
      BitVec candidate = target_rng.bits(message_bits);
      if (taken.insert(candidate.to_string()).second) return candidate;
    }
  };

  std::vector<EnrolledClass> classes;
  std::vector<std::vector<FeatureVector>> probes(spec.num_classes);
  classes.reserve(spec.num_classes);
  const std::size_t per_class = spec.samples_per_class + spec.probes_per_class;
  for (std::uint32_t c = 0; c < spec.num_classes; ++c) {
    auto begin = dataset.begin() + static_cast<std::ptrdiff_t>(c * per_class);
    std::vector<FeatureVector> training(begin, begin + spec.samples_per_class);
    probes[c].assign(begin + spec.samples_per_class,
                     begin + static_cast<std::ptrdiff_t>(per_class));

    EnrolledClass ec;
    ec.label = training.front().label;
    auto enrolled = enroll_record(ec.label, training, config, class_seeds[c],
                                  /*created_at=*/0, next_free_message());
    ec.record = std::move(enrolled.record);
    ec.committed_template = std::move(enrolled.committed_template);
    ec.key = gen_matrix(class_seeds[c].projection, config.d, config.k);

    ec.feature_centroid.assign(config.d, 0.0);
    for (const auto& fv : training)
      for (std::size_t i = 0; i < config.d; ++i)
        ec.feature_centroid[i] += fv.values[i];
    for (auto& v : ec.feature_centroid)
      v /= static_cast<double>(training.size());
    ec.projected_centroid = project(ec.key, ec.feature_centroid).values;
    classes.push_back(std::move(ec));
  }

  BenchmarkResult result;
  result.spec = spec;
  result.config = config;
  result.table.score_scale = config.score_scale;
  result.table.n_total = config.n_total();

  // Genuine probes drive both the accept rate and the stage score table.
  double sum_feature = 0, sum_cancelable = 0, sum_binary = 0;
  for (std::uint32_t c = 0; c < spec.num_classes; ++c) {
    const auto& ec = classes[c];
    for (std::size_t p = 0; p < probes[c].size(); ++p) {
      const auto& probe = probes[c][p];
      ScoreRow row;
      row.probe_id = ec.label + "/probe_" + std::to_string(p);
      row.feature_score =
          real_match_score(probe.values, ec.feature_centroid,
                           static_cast<int>(config.score_scale));
      auto projected = project(ec.key, probe);
      row.cancelable_score =
          real_match_score(projected.values, ec.projected_centroid,
                           static_cast<int>(config.score_scale));
      auto binary = binarize(ec.record.model, projected.values);
      row.binary_score =
          binary_match_score(binary.bits, ec.committed_template);

      auto verdict = verify_record(ec.record, probe);
      row.accepted = verdict.accept;
      for (const auto& e : verdict.block_errors)
        if (e) row.errors_corrected += *e;

      ++result.genuine_trials;
      if (row.accepted) ++result.genuine_accepts;
      sum_feature += double(row.feature_score) / config.score_scale;
      sum_cancelable += double(row.cancelable_score) / config.score_scale;
      sum_binary += double(row.binary_score) / config.n_total();
      result.table.rows.push_back(std::move(row));
    }
  }
  auto n_rows = static_cast<double>(result.table.rows.size());
  result.table.mean_feature = sum_feature / n_rows;
  result.table.mean_cancelable = sum_cancelable / n_rows;
  result.table.mean_binary = sum_binary / n_rows;
  result.table.binary_beats_cancelable =
      result.table.mean_binary > result.table.mean_cancelable;

  // Imposter trials: every probe against every other class's record.
  for (std::uint32_t c = 0; c < spec.num_classes; ++c) {
    for (std::uint32_t other = 0; other < spec.num_classes; ++other) {
      if (other == c) continue;
      for (const auto& probe : probes[other]) {
        ++result.imposter_trials;
        if (verify_record(classes[c].record, probe).accept)
          ++result.imposter_accepts;
      }
    }
  }
  result.genuine_accept_rate =
      double(result.genuine_accepts) / double(result.genuine_trials);
  result.imposter_accept_rate =
      double(result.imposter_accepts) / double(result.imposter_trials);

  // Histograms over all samples binarized under their own class stage.
  std::vector<std::pair<std::string, BitVec>> labeled;
  for (std::uint32_t c = 0; c < spec.num_classes; ++c) {
    const auto& ec = classes[c];
    auto begin = dataset.begin() + static_cast<std::ptrdiff_t>(c * per_class);
    for (std::size_t i = 0; i < per_class; ++i) {
      auto projected = project(ec.key, *(begin + static_cast<std::ptrdiff_t>(i)));
      labeled.emplace_back(ec.label,
                           binarize(ec.record.model, projected.values).bits);
    }
  }
  result.histograms = make_histograms(labeled, config.n_total());
  return result;
}

TimingReport timing_report(const BenchmarkSpec& spec, const StageConfig& config,
                           std::uint32_t repetitions) {
  if (repetitions < 1)
    throw InvalidArgument("timing_report: repetitions must be >= 1");

  SynthSpec synth;
  synth.seed = spec.seed;
  synth.num_classes = 1;
  synth.samples_per_class = spec.samples_per_class + 1;
  synth.dim = config.d;
  synth.class_center_scale = spec.class_center_scale;
  synth.within_sigma = spec.within_sigma;
  auto dataset = synth_classes(synth);
  std::vector<FeatureVector> training(dataset.begin(), dataset.end() - 1);
  FeatureVector query = dataset.back();

  EnrollSeeds seeds{1, 2, 3};
  TimingReport report;
  report.repetitions = repetitions;
  report.spread_defined = repetitions > 1;

  std::vector<std::uint64_t> e_total, e_setup, e_project, e_train, e_commit;
  std::vector<std::uint64_t> v_total, v_setup, v_project, v_binarize, v_commit;
  TemplateRecord record;
  for (std::uint32_t r = 0; r < repetitions; ++r) {
    auto enrolled =
        enroll_record("timing_user", training, config, seeds, /*created_at=*/0);
    e_total.push_back(enrolled.timings.total_ns);
    e_setup.push_back(enrolled.timings.setup_ns);
    e_project.push_back(enrolled.timings.project_ns);
    e_train.push_back(enrolled.timings.train_ns);
    e_commit.push_back(enrolled.timings.commitment_ns);
    record = std::move(enrolled.record);

    auto verified = verify_record(record, query.values);
    v_total.push_back(verified.timings.total_ns);
    v_setup.push_back(verified.timings.setup_ns);
    v_project.push_back(verified.timings.project_ns);
    v_binarize.push_back(verified.timings.binarize_ns);
    v_commit.push_back(verified.timings.commitment_ns);
  }

  report.enroll_total = stats_of(e_total);
  report.enroll_setup = stats_of(e_setup);
  report.enroll_project = stats_of(e_project);
  report.enroll_train = stats_of(e_train);
  report.enroll_commit = stats_of(e_commit);
  report.verify_total = stats_of(v_total);
  report.verify_setup = stats_of(v_setup);
  report.verify_project = stats_of(v_project);
  report.verify_binarize = stats_of(v_binarize);
  report.verify_commit = stats_of(v_commit);

  double stage_sum =
      double(report.verify_setup.median_ns) + double(report.verify_project.median_ns) +
      double(report.verify_binarize.median_ns) + double(report.verify_commit.median_ns);
  report.verify_stage_consistency =
      report.verify_total.median_ns == 0
          ? 0
          : stage_sum / double(report.verify_total.median_ns);
  return report;
}

SecurityReport security_report_preset(const std::string& name) {
  // The published stage lengths: random projection Kc=3772, fuzzy commitment
  // Kc=11340, full algorithm Kc=6800. The BDA stage length is the binary
  // template the commitment consumes, hence 11340 as well.
  if (name == "paper-novel") return assemble_report(name, 3772, 11340, 11340, 6800);
  throw InvalidArgument("unknown security preset '" + name +
                        "' (available: paper-novel)");
}

std::vector<std::string> security_presets() { return {"paper-novel"}; }

SecurityReport security_report_from_kc(std::uint64_t rp, std::uint64_t bda,
                                       std::uint64_t fc, std::uint64_t full) {
  return assemble_report("explicit", rp, bda, fc, full);
}

SecurityReport security_report_from_config(const StageConfig& config) {
  config.validate();
  std::uint64_t n_total = config.n_total();
  return assemble_report("config", std::uint64_t{64} * config.k, n_total,
                         n_total, (n_total + 7) / 8 * 8);
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) widths[i] = header[i].size();
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw InvalidArgument("render_table: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i)
      widths[i] = std::max(widths[i], row[i].size());
  }
  auto emit_row = [&](const std::vector<std::string>& row, std::string& out) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      if (i + 1 < row.size())
        out.append(widths[i] - row[i].size() + 2, ' ');
    }
    out += '\n';
  };
  std::string out;
  emit_row(header, out);
  std::size_t rule = 0;
  for (std::size_t i = 0; i < widths.size(); ++i)
    rule += widths[i] + (i + 1 < widths.size() ? 2 : 0);
  out.append(rule, '-');
  out += '\n';
  for (const auto& row : rows) emit_row(row, out);
  return out;
}

std::string score_table_text(const ScoreTable& table) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : table.rows) {
    std::string novel = row.accepted
                            ? std::to_string(static_cast<int>(table.n_total) -
                                             row.errors_corrected)
                            : "REJECT";
    rows.push_back({row.probe_id, std::to_string(row.feature_score),
                    std::to_string(row.cancelable_score),
                    std::to_string(row.binary_score), novel});
  }
  std::string out = render_table(
      {"Images", "Feature Vector", "Cancelable Template",
       "Binary Template Using BDA", "Novel Algorithm"},
      rows);
  out += "\nnormalized genuine means: feature " +
         std::to_string(table.mean_feature) + ", cancelable " +
         std::to_string(table.mean_cancelable) + ", binary " +
         std::to_string(table.mean_binary) + "\n";
  out += "binary stage beats cancelable stage: ";
  out += table.binary_beats_cancelable ? "yes" : "no";
  out += '\n';
  return out;
}

json score_table_json(const ScoreTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    rows.push_back(json{{"probe_id", row.probe_id},
                        {"feature_score", row.feature_score},
                        {"cancelable_score", row.cancelable_score},
                        {"binary_score", row.binary_score},
                        {"decision", row.accepted ? "accept" : "reject"},
                        {"errors_corrected", row.errors_corrected}});
  }
  return json{{"schema", "bdatp.score-table/1"},
              {"score_scale", table.score_scale},
              {"n_total", table.n_total},
              {"rows", rows},
              {"normalized_means",
               json{{"feature", table.mean_feature},
                    {"cancelable", table.mean_cancelable},
                    {"binary", table.mean_binary}}},
              {"binary_beats_cancelable", table.binary_beats_cancelable}};
}

std::string histogram_csv(const Histogram& histogram) {
  std::string out = "score,count\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(histogram.counts[i]);
    out += '\n';
  }
  return out;
}

json histograms_json(const HistogramPair& histograms) {
  return json{{"schema", "bdatp.histograms/1"},
              {"genuine", histograms.genuine.counts},
              {"imposter", histograms.imposter.counts}};
}

json timing_report_json(const TimingReport& report) {
  return json{{"schema", "bdatp.timing-report/1"},
              {"repetitions", report.repetitions},
              {"spread_defined", report.spread_defined},
              {"enroll",
               json{{"total", stats_json(report.enroll_total)},
                    {"setup", stats_json(report.enroll_setup)},
                    {"project", stats_json(report.enroll_project)},
                    {"train", stats_json(report.enroll_train)},
                    {"commit", stats_json(report.enroll_commit)}}},
              {"verify",
               json{{"total", stats_json(report.verify_total)},
                    {"setup", stats_json(report.verify_setup)},
                    {"project", stats_json(report.verify_project)},
                    {"binarize", stats_json(report.verify_binarize)},
                    {"commit", stats_json(report.verify_commit)}}},
              {"verify_stage_consistency", report.verify_stage_consistency}};
}

TimingReport timing_report_from_json(const json& j) {
  if (j.at("schema").get<std::string>() != "bdatp.timing-report/1")
    throw ParseError("timing report: unknown schema");
  TimingReport report;
  report.repetitions = j.at("repetitions").get<std::uint32_t>();
  report.spread_defined = j.at("spread_defined").get<bool>();
  const auto& enroll = j.at("enroll");
  report.enroll_total = stats_from_json(enroll.at("total"));
  report.enroll_setup = stats_from_json(enroll.at("setup"));
  report.enroll_project = stats_from_json(enroll.at("project"));
  report.enroll_train = stats_from_json(enroll.at("train"));
  report.enroll_commit = stats_from_json(enroll.at("commit"));
  const auto& verify = j.at("verify");
  report.verify_total = stats_from_json(verify.at("total"));
  report.verify_setup = stats_from_json(verify.at("setup"));
  report.verify_project = stats_from_json(verify.at("project"));
  report.verify_binarize = stats_from_json(verify.at("binarize"));
  report.verify_commit = stats_from_json(verify.at("commit"));
  report.verify_stage_consistency =
      j.at("verify_stage_consistency").get<double>();
  return report;
}

std::string security_report_text(const SecurityReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& stage : report.stages) {
    rows.push_back({stage.stage, std::to_string(stage.kc),
                    "2^" + std::to_string(stage.brute_force_bits),
                    stage.brute_force_rating, stage.smart_attack_rating});
  }
  std::string out = "security report (" + report.source + ")\n";
  out += render_table({"Stage", "Kc", "Brute-force trials", "Brute Force",
                       "Affine Transformation"},
                      rows);
  return out;
}

json security_report_json(const SecurityReport& report) {
  json stages = json::array();
  for (const auto& stage : report.stages) {
    stages.push_back(json{{"stage", stage.stage},
                          {"kc", stage.kc},
                          {"brute_force_bits", stage.brute_force_bits},
                          {"brute_force_rating", stage.brute_force_rating},
                          {"smart_attack_rating", stage.smart_attack_rating}});
  }
  return json{{"schema", "bdatp.security-report/1"},
              {"source", report.source},
              {"stages", stages}};
}

json benchmark_summary_json(const BenchmarkResult& result) {
  return json{{"schema", "bdatp.benchmark/1"},
              {"seed", result.spec.seed},
              {"num_classes", result.spec.num_classes},
              {"samples_per_class", result.spec.samples_per_class},
              {"probes_per_class", result.spec.probes_per_class},
              {"n_total", result.config.n_total()},
              {"genuine_trials", result.genuine_trials},
              {"genuine_accepts", result.genuine_accepts},
              {"genuine_accept_rate", result.genuine_accept_rate},
              {"imposter_trials", result.imposter_trials},
              {"imposter_accepts", result.imposter_accepts},
              {"imposter_accept_rate", result.imposter_accept_rate},
              {"normalized_means",
               json{{"feature", result.table.mean_feature},
                    {"cancelable", result.table.mean_cancelable},
                    {"binary", result.table.mean_binary}}},
              {"binary_beats_cancelable", result.table.binary_beats_cancelable}};
}

}  // namespace bdatp::eval
