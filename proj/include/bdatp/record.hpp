#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bdatp/bch.hpp"
#include "bdatp/bda.hpp"
#include "bdatp/commitment.hpp"

namespace bdatp {

// Stage parameters for one enrollment. n_total = blocks * (2^m - 1) output
// bits; acceptance policy is all-blocks.
struct StageConfig {
  std::uint32_t d = 128;       // feature dimension
  std::uint32_t k = 32;        // projected dimension
  std::uint32_t code_m = 6;    // field degree per block
  std::uint32_t code_t = 5;    // correction capability per block
  std::uint32_t blocks = 1;
  PerceptronHyper perceptron;
  std::uint32_t score_scale = 256;
  // Synthetic cohort pseudo-classes mixed into perceptron training so the
  // per-bit discriminants separate the genuine class from the population
  // rather than collapsing onto the centroid direction. Capped at
  // k + 1 - |training| during enrollment to keep each bit's training set
  // linearly separable.
  std::uint32_t cohort_classes = 20;

  std::uint32_t block_n() const { return (1u << code_m) - 1; }
  std::uint32_t n_total() const { return blocks * block_n(); }
  void validate() const;
};

// Helper data persisted per user: the discriminant functions and training
// bookkeeping. The class target codeword is deliberately not stored -- for a
// converged model the committed template equals it, and the record must not
// contain the committed template in any recoverable form.
struct StoredModel {
  std::string class_id;
  std::uint32_t n_total = 0;
  std::uint32_t k = 0;
  std::vector<double> weights;
  std::vector<double> biases;
  TrainMeta train_meta;
};

BinaryTemplate binarize(const StoredModel& model, const std::vector<double>& query);

struct TemplateRecord {
  std::string user_id;
  std::uint8_t version = 1;
  StageConfig config;
  std::uint64_t projection_seed = 0;
  StoredModel model;
  std::vector<Commitment> commitments;  // one per block
  std::int64_t created_at = 0;          // unix seconds

  bool operator==(const TemplateRecord& other) const;
};

// Byte-packed record: magic "BDAT", version byte, length-prefixed sections
// (meta, config, seed, model, commitments), trailing CRC-32. Layout frozen
// in docs/record-format.md.
std::vector<std::uint8_t> serialize_record(const TemplateRecord& record);
TemplateRecord deserialize_record(const std::vector<std::uint8_t>& bytes);

}  // namespace bdatp
