#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bdatp/bch.hpp"
#include "bdatp/randproj.hpp"

namespace bdatp {

struct PerceptronHyper {
  std::uint32_t epochs = 200;
  double rate = 0.1;
};

struct TrainMeta {
  std::uint32_t epochs_run = 0;
  bool converged = false;
  std::uint32_t residual_bit_errors = 0;
};

// One linear discriminant function per output bit, trained so every sample
// of the class binarizes to the class target codeword. weights is
// n_total x k row-major (one row per bit).
struct ClassModel {
  std::string class_id;
  std::uint32_t n_total = 0;
  std::uint32_t k = 0;
  std::vector<double> weights;
  std::vector<double> biases;
  BitVec target;  // length n_total; B concatenated codewords when B > 1
  std::string code_ref;
  TrainMeta train_meta;
};

struct BinaryTemplate {
  BitVec bits;
  std::string code_ref;
};

// Distinct target codeword per class, deterministic in seed. Distinctness
// gives between-class target distance >= d_min.
std::map<std::string, Codeword> assign_targets(
    const std::vector<std::string>& class_ids, const CodeParams& params,
    std::uint64_t seed);

// Auxiliary training example with its own target bits. Without cohort
// examples every sample of a one-class training set carries the same label
// per bit, all discriminants collapse onto the class-centroid direction,
// and the binarization degenerates to sign(centroid . query); a cohort with
// diverse codeword targets is what makes the bits discriminative.
struct CohortExample {
  RealTemplate sample;
  BitVec target;
};

// Per-bit perceptrons: bit j is trained with label target[j] mapped to +-1,
// update w += rate*label*x, b += rate*label on misclassification (predicted
// bit is activation > 0; ties binarize to 0). Cohort examples join the
// update loop with their own targets, after the class samples, in the given
// order. Zero initialization and fixed sample order make training
// deterministic. Stops early once an epoch makes no update; convergence and
// the residual bit-error count are reported over the class samples only.
ClassModel train_class(const std::string& class_id,
                       const std::vector<RealTemplate>& samples,
                       const BitVec& target, const std::string& code_ref,
                       const PerceptronHyper& hyper,
                       const std::vector<CohortExample>& cohort = {});

BinaryTemplate binarize(const ClassModel& model, const RealTemplate& query);
BinaryTemplate binarize(const ClassModel& model, const std::vector<double>& query);

// n - hamming(a, b): identical templates score n.
int binary_match_score(const BinaryTemplate& a, const BinaryTemplate& b);
int binary_match_score(const BitVec& a, const BitVec& b);

}  // namespace bdatp
