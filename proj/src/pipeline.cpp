#include "bdatp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <set>

#include "bdatp/randproj.hpp"
#include "bdatp/rng.hpp"

namespace bdatp {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point from, Clock::time_point to) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(to - from).count());
}

}  // namespace

std::uint64_t target_message_seed(std::uint64_t targets_seed) {
  return SeededRng(targets_seed).next_u64();
}

std::uint64_t cohort_seed(std::uint64_t targets_seed) {
  SeededRng rng(targets_seed);
  rng.next_u64();
  return rng.next_u64();
}

BitVec draw_target_message(std::uint64_t targets_seed, const CodeParams& params,
                           std::uint32_t blocks) {
  SeededRng rng(target_message_seed(targets_seed));
  return rng.bits(std::size_t(params.k_msg) * blocks);
}

// Synthetic cohort: pseudo-classes that stand in for the population the
// enrolled class must be discriminated from, each labeled with its own
// random codeword target. Directions are isotropic with the radius spread
// over [0.4, 1.2] of the training shell so the region between the origin and
// the class cluster is covered, plus one shadow point at half the centroid
// to fence the corridor imposters correlated with the class would otherwise
// walk through. Only one cohort point may sit on the class ray: a linear
// discriminant is monotone along any line, so two or more off-cluster points
// there with independent codeword labels would be unseparable and stall
// training. Draw order per pseudo-class: message bits per block (redrawn
// until distinct from the genuine target and earlier cohort targets), then
// k normals and one uniform for the sample.
static std::vector<CohortExample> make_cohort(
    std::uint64_t seed, const CodeParams& params, const StageConfig& config,
    const std::vector<RealTemplate>& projected, const BitVec& genuine_message) {
  std::size_t budget =
      config.k + 1 > projected.size() ? config.k + 1 - projected.size() : 0;
  std::size_t count = std::min<std::size_t>(config.cohort_classes, budget);
  if (count == 0) return {};

  std::vector<double> centroid(config.k, 0.0);
  double mean_sq = 0;
  for (const auto& rt : projected) {
    for (std::size_t i = 0; i < config.k; ++i) centroid[i] += rt.values[i];
    for (double v : rt.values) mean_sq += v * v;
  }
  for (auto& v : centroid) v /= static_cast<double>(projected.size());
  mean_sq /= static_cast<double>(projected.size());
  double shell = std::sqrt(mean_sq);  // typical training norm

  SeededRng rng(seed);
  std::set<std::string> taken{genuine_message.to_string()};
  std::size_t message_bits = std::size_t(params.k_msg) * config.blocks;
  std::vector<CohortExample> cohort;
  cohort.reserve(count);

  auto next_target = [&](CohortExample& example) {
    BitVec message;
    do {
      message = rng.bits(message_bits);
    } while (!taken.insert(message.to_string()).second);
    for (std::uint32_t b = 0; b < config.blocks; ++b)
      example.target.append(
          bch_encode(params, message.slice(std::size_t(b) * params.k_msg,
                                           static_cast<std::size_t>(params.k_msg)))
              .bits);
  };

  std::size_t shadows = count >= 4 ? 1 : 0;
  for (std::size_t i = 0; i < count; ++i) {
    CohortExample example;
    next_target(example);
    example.sample.values.resize(config.k);
    if (i < shadows) {
      for (std::size_t j = 0; j < config.k; ++j)
        example.sample.values[j] = 0.5 * centroid[j];
    } else {
      double norm_sq = 0;
      for (auto& v : example.sample.values) {
        v = rng.normal();
        norm_sq += v * v;
      }
      double radius = shell * (0.4 + 0.8 * rng.uniform01());
      double factor = norm_sq > 0 ? radius / std::sqrt(norm_sq) : 0.0;
      for (auto& v : example.sample.values) v *= factor;
    }
    cohort.push_back(std::move(example));
  }

  // Margin guard: jittered copies of the training samples, still labeled
  // with the genuine target. The zero-margin perceptron otherwise settles
  // boundaries touching the training cloud and held-out genuine samples
  // flip those bits; the augmented cloud keeps boundaries off by roughly
  // the within-class scatter.
  BitVec genuine_target;
  for (std::uint32_t b = 0; b < config.blocks; ++b)
    genuine_target.append(
        bch_encode(params,
                   genuine_message.slice(std::size_t(b) * params.k_msg,
                                         static_cast<std::size_t>(params.k_msg)))
            .bits);
  double scatter_sq = 0;
  for (const auto& rt : projected)
    for (std::size_t j = 0; j < config.k; ++j) {
      double diff = rt.values[j] - centroid[j];
      scatter_sq += diff * diff;
    }
  double scatter =
      std::sqrt(scatter_sq / (static_cast<double>(projected.size()) * config.k));
  for (const auto& rt : projected) {
    CohortExample example;
    example.target = genuine_target;
    example.sample.values.resize(config.k);
    for (std::size_t j = 0; j < config.k; ++j)
      example.sample.values[j] = rt.values[j] + 1.5 * scatter * rng.normal();
    cohort.push_back(std::move(example));
  }
  return cohort;
}

EnrollResult enroll_record(const std::string& user_id,
                           const std::vector<FeatureVector>& training,
                           const StageConfig& config, const EnrollSeeds& seeds,
                           std::optional<std::int64_t> created_at,
                           const std::optional<BitVec>& target_message) {
  config.validate();
  if (user_id.empty()) throw InvalidArgument("enroll: empty user id");
  if (training.empty()) throw InvalidArgument("enroll: no training vectors");
  for (const auto& fv : training) {
    if (fv.values.size() != config.d)
      throw InvalidArgument("enroll: training vector dimension " +
                            std::to_string(fv.values.size()) + " != d " +
                            std::to_string(config.d));
    if (fv.label != training.front().label)
      throw InvalidArgument("enroll: training vectors carry mixed labels");
  }

  auto t0 = Clock::now();
  CodeParams params = build_code(static_cast<int>(config.code_m),
                                 static_cast<int>(config.code_t));

  BitVec message = target_message
                       ? *target_message
                       : draw_target_message(seeds.targets, params, config.blocks);
  if (message.size() != std::size_t(params.k_msg) * config.blocks)
    throw InvalidArgument("enroll: target message length mismatch");

  BitVec target;
  for (std::uint32_t b = 0; b < config.blocks; ++b) {
    Codeword cw = bch_encode(
        params, message.slice(std::size_t(b) * params.k_msg,
                              static_cast<std::size_t>(params.k_msg)));
    target.append(cw.bits);
  }

  ProjectionKey key = gen_matrix(seeds.projection, config.d, config.k);
  auto t1 = Clock::now();
  std::vector<RealTemplate> projected;
  projected.reserve(training.size());
  for (const auto& fv : training) projected.push_back(project(key, fv));
  auto t2 = Clock::now();

  auto cohort = make_cohort(cohort_seed(seeds.targets), params, config,
                            projected, message);
  ClassModel model = train_class(training.front().label, projected, target,
                                 params.ref(), config.perceptron, cohort);

  std::vector<double> centroid(config.k, 0.0);
  for (const auto& rt : projected)
    for (std::size_t i = 0; i < centroid.size(); ++i)
      centroid[i] += rt.values[i];
  for (auto& v : centroid) v /= static_cast<double>(projected.size());
  BitVec committed = binarize(model, centroid).bits;
  auto t3 = Clock::now();

  EnrollResult result;
  result.committed_template = committed;
  result.target = target;
  result.converged = model.train_meta.converged;
  result.residual_bit_errors = model.train_meta.residual_bit_errors;

  TemplateRecord& record = result.record;
  record.user_id = user_id;
  record.config = config;
  record.projection_seed = seeds.projection;
  record.model.class_id = model.class_id;
  record.model.n_total = model.n_total;
  record.model.k = model.k;
  record.model.weights = std::move(model.weights);
  record.model.biases = std::move(model.biases);
  record.model.train_meta = model.train_meta;
  record.created_at =
      created_at ? *created_at : static_cast<std::int64_t>(std::time(nullptr));

  SeededRng commit_seeds(seeds.commitment);
  for (std::uint32_t b = 0; b < config.blocks; ++b) {
    BitVec block =
        committed.slice(std::size_t(b) * params.n, static_cast<std::size_t>(params.n));
    record.commitments.push_back(commit(block, params, commit_seeds.next_u64()));
  }
  auto t4 = Clock::now();
  result.timings.setup_ns = elapsed_ns(t0, t1);
  result.timings.project_ns = elapsed_ns(t1, t2);
  result.timings.train_ns = elapsed_ns(t2, t3);
  result.timings.commitment_ns = elapsed_ns(t3, t4);
  result.timings.total_ns = elapsed_ns(t0, t4);
  return result;
}

VerifyResult verify_record(const TemplateRecord& record,
                           const std::vector<double>& query) {
  if (query.size() != record.config.d)
    throw InvalidArgument("verify: query dimension " +
                          std::to_string(query.size()) + " != d " +
                          std::to_string(record.config.d));

  VerifyResult result;
  auto t0 = Clock::now();
  CodeParams params = build_code(static_cast<int>(record.config.code_m),
                                 static_cast<int>(record.config.code_t));
  ProjectionKey key =
      gen_matrix(record.projection_seed, record.config.d, record.config.k);
  auto t1 = Clock::now();
  RealTemplate projected = project(key, query);
  auto t2 = Clock::now();
  BinaryTemplate binary = binarize(record.model, projected.values);
  auto t3 = Clock::now();

  bool all_accept = true;
  for (std::uint32_t b = 0; b < record.config.blocks; ++b) {
    BitVec block = binary.bits.slice(std::size_t(b) * params.n,
                                     static_cast<std::size_t>(params.n));
    auto accept = verify_commitment(record.commitments[b], params, block);
    if (accept) {
      result.block_errors.push_back(accept->errors_corrected);
    } else {
      result.block_errors.push_back(std::nullopt);
      all_accept = false;
    }
  }
  auto t4 = Clock::now();

  result.accept = all_accept;
  result.timings.setup_ns = elapsed_ns(t0, t1);
  result.timings.project_ns = elapsed_ns(t1, t2);
  result.timings.binarize_ns = elapsed_ns(t2, t3);
  result.timings.commitment_ns = elapsed_ns(t3, t4);
  result.timings.total_ns = elapsed_ns(t0, t4);
  return result;
}

VerifyResult verify_record(const TemplateRecord& record, const FeatureVector& query) {
  return verify_record(record, query.values);
}

}  // namespace bdatp
