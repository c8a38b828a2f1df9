#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bdatp/features.hpp"
#include "bdatp/record.hpp"

namespace bdatp {

struct EnrollSeeds {
  std::uint64_t projection = 0;
  std::uint64_t targets = 0;
  std::uint64_t commitment = 0;
};

struct EnrollTimings {
  std::uint64_t setup_ns = 0;  // code build + matrix generation + targets
  std::uint64_t project_ns = 0;
  std::uint64_t train_ns = 0;
  std::uint64_t commitment_ns = 0;
  std::uint64_t total_ns = 0;
};

// Enrollment-time artifacts. committed_template and target exist only in
// memory; the record stores helper data and commitments.
struct EnrollResult {
  TemplateRecord record;
  BitVec committed_template;
  BitVec target;
  bool converged = false;
  std::uint32_t residual_bit_errors = 0;
  EnrollTimings timings;
};

struct StageTimings {
  std::uint64_t setup_ns = 0;     // code build + projection regeneration
  std::uint64_t project_ns = 0;
  std::uint64_t binarize_ns = 0;
  std::uint64_t commitment_ns = 0;
  std::uint64_t total_ns = 0;
};

struct VerifyResult {
  bool accept = false;
  // Per block: errors corrected on acceptance, nullopt where the block
  // rejected.
  std::vector<std::optional<int>> block_errors;
  StageTimings timings;
};

// seeds.targets forks into two independent streams: the first u64 seeds the
// target-message draw (or the store registry's rejection stream), the second
// seeds the synthetic training cohort.
std::uint64_t target_message_seed(std::uint64_t targets_seed);
std::uint64_t cohort_seed(std::uint64_t targets_seed);

// The concatenated B * k_msg target message an enrollment uses when no
// registry dictates one: the first draw from SeededRng(target_message_seed).
BitVec draw_target_message(std::uint64_t targets_seed, const CodeParams& params,
                           std::uint32_t blocks);

// Full enrollment path: seeded projection, per-bit perceptron training
// toward the target codewords, fuzzy commitment of the binarized training
// centroid (one commitment per block; block b uses the b-th u64 drawn from
// SeededRng(seeds.commitment)).
//
// target_message overrides the seeds.targets draw when a store registry has
// assigned one. created_at is injectable so records can be reproduced
// byte-identically.
EnrollResult enroll_record(const std::string& user_id,
                           const std::vector<FeatureVector>& training,
                           const StageConfig& config, const EnrollSeeds& seeds,
                           std::optional<std::int64_t> created_at = std::nullopt,
                           const std::optional<BitVec>& target_message = std::nullopt);

// Authentication path: regenerate projection from the stored seed, project,
// binarize with stored helper data, verify every block commitment. Accepts
// iff all blocks accept.
VerifyResult verify_record(const TemplateRecord& record,
                           const std::vector<double>& query);
VerifyResult verify_record(const TemplateRecord& record, const FeatureVector& query);

}  // namespace bdatp
