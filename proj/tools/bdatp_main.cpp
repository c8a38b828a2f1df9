// bdatp command-line front end: enroll, verify, revoke, bench, security.
//
// Exit codes: 0 success/accept, 1 reject, 2 domain error (duplicate or
// unknown user, capacity), 3 input or configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdatp/evaluation.hpp"
#include "bdatp/rng.hpp"
#include "bdatp/store.hpp"

namespace {

using nlohmann::json;

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitDomain = 2;
constexpr int kExitInput = 3;

struct GlobalOptions {
  std::string store_root;
  std::string config_path;
  bool json_output = false;
};

std::uint64_t os_entropy_seed() {
  std::random_device rd;
  return (std::uint64_t(rd()) << 32) ^ rd();
}

bdatp::StageConfig load_config(const GlobalOptions& opts) {
  bdatp::StageConfig config;
  if (opts.config_path.empty()) return config;
  std::ifstream in(opts.config_path);
  if (!in) throw bdatp::IoError("cannot open config " + opts.config_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw bdatp::ParseError(opts.config_path + ": " + e.what());
  }
  if (j.contains("d")) config.d = j["d"].get<std::uint32_t>();
  if (j.contains("k")) config.k = j["k"].get<std::uint32_t>();
  if (j.contains("m")) config.code_m = j["m"].get<std::uint32_t>();
  if (j.contains("t")) config.code_t = j["t"].get<std::uint32_t>();
  if (j.contains("blocks")) config.blocks = j["blocks"].get<std::uint32_t>();
  if (j.contains("epochs"))
    config.perceptron.epochs = j["epochs"].get<std::uint32_t>();
  if (j.contains("rate")) config.perceptron.rate = j["rate"].get<double>();
  if (j.contains("score_scale"))
    config.score_scale = j["score_scale"].get<std::uint32_t>();
  config.validate();
  return config;
}

bdatp::FeatureFormat parse_format(const std::string& name) {
  if (name == "csv") return bdatp::FeatureFormat::kCsv;
  if (name == "packed") return bdatp::FeatureFormat::kPacked;
  throw bdatp::InvalidArgument("unknown feature format '" + name + "'");
}

// Seeds resolve in order: explicit per-stage flag, master --seed derivation,
// OS entropy. The seeds in effect are always reported for audit.
struct SeedFlags {
  std::optional<std::uint64_t> master;
  std::optional<std::uint64_t> projection;
  std::optional<std::uint64_t> targets;
  std::optional<std::uint64_t> commitment;

  bdatp::EnrollSeeds resolve() const {
    bdatp::EnrollSeeds seeds;
    if (master) {
      bdatp::SeededRng rng(*master);
      seeds.projection = rng.next_u64();
      seeds.targets = rng.next_u64();
      seeds.commitment = rng.next_u64();
    } else {
      seeds.projection = os_entropy_seed();
      seeds.targets = os_entropy_seed();
      seeds.commitment = os_entropy_seed();
    }
    if (projection) seeds.projection = *projection;
    if (targets) seeds.targets = *targets;
    if (commitment) seeds.commitment = *commitment;
    return seeds;
  }
};

void add_seed_flags(CLI::App* cmd, SeedFlags& seeds) {
  cmd->add_option("--seed", seeds.master,
                  "Master seed; per-stage seeds derive from it");
  cmd->add_option("--seed-projection", seeds.projection, "Projection seed");
  cmd->add_option("--seed-targets", seeds.targets, "Target-assignment seed");
  cmd->add_option("--seed-commitment", seeds.commitment, "Commitment seed");
}

json enroll_summary(const bdatp::EnrollResult& result,
                    const bdatp::EnrollSeeds& seeds) {
  return json{{"schema", "bdatp.enroll/1"},
              {"user", result.record.user_id},
              {"n_total", result.record.config.n_total()},
              {"converged", result.converged},
              {"residual_bit_errors", result.residual_bit_errors},
              {"seeds",
               json{{"projection", seeds.projection},
                    {"targets", seeds.targets},
                    {"commitment", seeds.commitment}}}};
}

void report_enrollment(const GlobalOptions& opts, const char* verb,
                       const bdatp::EnrollResult& result,
                       const bdatp::EnrollSeeds& seeds) {
  if (opts.json_output) {
    std::cout << enroll_summary(result, seeds).dump(2) << "\n";
  } else {
    std::cout << verb << " " << result.record.user_id << " (n_total "
              << result.record.config.n_total() << ", seeds: projection "
              << seeds.projection << ", targets " << seeds.targets
              << ", commitment " << seeds.commitment << ")\n";
  }
  if (!result.converged)
    std::cerr << "warning: training did not converge ("
              << result.residual_bit_errors
              << " residual bit errors); verification may be unreliable\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Biometric template protection toolkit"};
  app.require_subcommand(1);

  GlobalOptions opts;
  const char* env_root = std::getenv("BDATP_STORE");
  opts.store_root = env_root ? env_root : "./bdatp-store";
  app.add_option("--store", opts.store_root,
                 "Template store directory (env BDATP_STORE)");
  app.add_option("--config", opts.config_path, "Stage config JSON file");
  app.add_flag("--json", opts.json_output, "Emit JSON instead of text");

  // enroll
  auto* enroll = app.add_subcommand("enroll", "Enroll a user from a feature file");
  std::string enroll_user, enroll_file, enroll_format = "csv";
  bool overwrite = false;
  SeedFlags enroll_seeds;
  std::optional<std::int64_t> timestamp;
  enroll->add_option("user", enroll_user, "User id")->required();
  enroll->add_option("--features", enroll_file, "Training feature file")->required();
  enroll->add_option("--input-format", enroll_format, "csv or packed");
  enroll->add_flag("--overwrite", overwrite, "Replace an existing enrollment");
  enroll->add_option("--timestamp", timestamp, "Fixed created_at (unix seconds)");
  add_seed_flags(enroll, enroll_seeds);

  // verify
  auto* verify = app.add_subcommand("verify", "Verify a query against a user");
  std::string verify_user, verify_file, verify_format = "csv";
  std::size_t verify_row = 0;
  verify->add_option("user", verify_user, "User id")->required();
  verify->add_option("--features", verify_file, "Query feature file")->required();
  verify->add_option("--input-format", verify_format, "csv or packed");
  verify->add_option("--row", verify_row, "Row of the feature file to use");

  // revoke
  auto* revoke = app.add_subcommand(
      "revoke", "Reissue a user's template under fresh randomness");
  std::string revoke_user, revoke_file, revoke_format = "csv";
  SeedFlags revoke_seeds;
  std::optional<std::int64_t> revoke_timestamp;
  revoke->add_option("user", revoke_user, "User id")->required();
  revoke->add_option("--features", revoke_file, "Fresh training feature file")
      ->required();
  revoke->add_option("--input-format", revoke_format, "csv or packed");
  revoke->add_option("--timestamp", revoke_timestamp,
                     "Fixed created_at (unix seconds)");
  add_seed_flags(revoke, revoke_seeds);

  // bench
  auto* bench = app.add_subcommand(
      "bench", "Run the synthetic benchmark and write evaluation reports");
  bdatp::eval::BenchmarkSpec bench_spec;
  std::string bench_out = ".";
  std::uint32_t bench_reps = 25;
  std::uint32_t bench_dim = 0;
  bench->add_option("--seed", bench_spec.seed, "Benchmark seed");
  bench->add_option("--classes", bench_spec.num_classes, "Number of classes");
  bench->add_option("--samples", bench_spec.samples_per_class,
                    "Training samples per class");
  bench->add_option("--probes", bench_spec.probes_per_class,
                    "Held-out probes per class");
  bench->add_option("--sigma", bench_spec.within_sigma, "Within-class noise");
  bench->add_option("--center-scale", bench_spec.class_center_scale,
                    "Between-class spread");
  bench->add_option("--dim", bench_dim, "Feature dimension override");
  bench->add_option("--repetitions", bench_reps, "Timing repetitions");
  bench->add_option("--out", bench_out, "Output directory")->required();

  // security
  auto* security = app.add_subcommand(
      "security", "Stage-wise brute-force and smart-attack accounting");
  std::string preset;
  std::optional<std::uint64_t> kc_rp, kc_bda, kc_fc, kc_full;
  bool from_config = false;
  security->add_option("--preset", preset,
                       "Named preset (paper-novel)");
  security->add_option("--kc-rp", kc_rp, "Random-projection stage Kc");
  security->add_option("--kc-bda", kc_bda, "BDA stage Kc");
  security->add_option("--kc-fc", kc_fc, "Fuzzy-commitment stage Kc");
  security->add_option("--kc-full", kc_full, "Full-algorithm Kc");
  security->add_flag("--from-config", from_config,
                     "Derive stage lengths from the stage config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitAccept;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  bdatp::StageConfig config = load_config(opts);

  if (*enroll) {
    auto training =
        bdatp::load_features(enroll_file, parse_format(enroll_format));
    bdatp::Store store(opts.store_root);
    auto seeds = enroll_seeds.resolve();
    auto result =
        store.enroll(enroll_user, training, config, seeds, overwrite, timestamp);
    report_enrollment(opts, "enrolled", result, seeds);
    return kExitAccept;
  }

  if (*verify) {
    auto queries =
        bdatp::load_features(verify_file, parse_format(verify_format));
    if (verify_row >= queries.size())
      throw bdatp::InvalidArgument("--row " + std::to_string(verify_row) +
                                   " out of range, file has " +
                                   std::to_string(queries.size()) + " rows");
    bdatp::Store store(opts.store_root);
    auto result = store.verify(verify_user, queries[verify_row]);
    if (opts.json_output) {
      json blocks = json::array();
      for (const auto& e : result.block_errors)
        blocks.push_back(e ? json(*e) : json(nullptr));
      std::cout << json{{"schema", "bdatp.verify/1"},
                        {"user", verify_user},
                        {"decision", result.accept ? "accept" : "reject"},
                        {"block_errors_corrected", blocks},
                        {"timings_ns",
                         json{{"setup", result.timings.setup_ns},
                              {"project", result.timings.project_ns},
                              {"binarize", result.timings.binarize_ns},
                              {"commitment", result.timings.commitment_ns},
                              {"total", result.timings.total_ns}}}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << (result.accept ? "ACCEPT" : "REJECT") << " " << verify_user;
      if (result.accept) {
        int total = 0;
        for (const auto& e : result.block_errors) total += e ? *e : 0;
        std::cout << " (errors corrected: " << total << ")";
      }
      std::cout << "\n";
    }
    return result.accept ? kExitAccept : kExitReject;
  }

  if (*revoke) {
    auto training =
        bdatp::load_features(revoke_file, parse_format(revoke_format));
    bdatp::Store store(opts.store_root);
    auto seeds = revoke_seeds.resolve();
    auto result =
        store.revoke(revoke_user, training, config, seeds, revoke_timestamp);
    report_enrollment(opts, "revoked and reissued", result, seeds);
    return kExitAccept;
  }

  if (*bench) {
    if (bench_dim) config.d = bench_dim;
    std::filesystem::create_directories(bench_out);
    auto result = bdatp::eval::run_benchmark(bench_spec, config);
    auto timing = bdatp::eval::timing_report(bench_spec, config, bench_reps);

    auto write_text = [&](const std::string& name, const std::string& text) {
      std::ofstream out(std::filesystem::path(bench_out) / name,
                        std::ios::binary | std::ios::trunc);
      if (!out) throw bdatp::IoError("cannot write " + name);
      out << text;
    };
    write_text("score_table.json",
               bdatp::eval::score_table_json(result.table).dump(2) + "\n");
    write_text("score_table.txt", bdatp::eval::score_table_text(result.table));
    write_text("histogram_genuine.csv",
               bdatp::eval::histogram_csv(result.histograms.genuine));
    write_text("histogram_imposter.csv",
               bdatp::eval::histogram_csv(result.histograms.imposter));
    write_text("timing.json",
               bdatp::eval::timing_report_json(timing).dump(2) + "\n");
    write_text("summary.json",
               bdatp::eval::benchmark_summary_json(result).dump(2) + "\n");

    if (opts.json_output) {
      std::cout << bdatp::eval::benchmark_summary_json(result).dump(2) << "\n";
    } else {
      std::cout << "benchmark seed " << bench_spec.seed << ": genuine accept "
                << result.genuine_accepts << "/" << result.genuine_trials
                << ", imposter accept " << result.imposter_accepts << "/"
                << result.imposter_trials << "\nreports written to "
                << bench_out << "\n";
    }
    return kExitAccept;
  }

  if (*security) {
    bdatp::eval::SecurityReport report;
    if (!preset.empty()) {
      report = bdatp::eval::security_report_preset(preset);
    } else if (from_config) {
      report = bdatp::eval::security_report_from_config(config);
    } else if (kc_rp || kc_bda || kc_fc || kc_full) {
      if (!(kc_rp && kc_bda && kc_fc && kc_full))
        throw bdatp::InvalidArgument(
            "all of --kc-rp, --kc-bda, --kc-fc, --kc-full are required");
      report =
          bdatp::eval::security_report_from_kc(*kc_rp, *kc_bda, *kc_fc, *kc_full);
    } else {
      throw bdatp::InvalidArgument(
          "pass --preset, --from-config, or explicit --kc-* values");
    }
    if (opts.json_output)
      std::cout << bdatp::eval::security_report_json(report).dump(2) << "\n";
    else
      std::cout << bdatp::eval::security_report_text(report);
    return kExitAccept;
  }

  return kExitInput;  // unreachable: a subcommand is required
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const bdatp::NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const bdatp::DuplicateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const bdatp::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
