#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bdatp/errors.hpp"

namespace bdatp {

// Raw pipeline input: a real-valued feature vector with its class label.
// Feature extraction from images is out of scope; vectors arrive from files
// or from the synthetic generator below.
struct FeatureVector {
  std::string label;
  std::vector<double> values;
};

enum class FeatureFormat { kCsv, kPacked };

// Class-structured synthetic dataset parameters. Stands in for the face
// databases: each class gets a center drawn from N(0, class_center_scale^2)
// per coordinate, samples are center + N(0, within_sigma^2) noise.
struct SynthSpec {
  std::uint64_t seed = 0;
  std::uint32_t num_classes = 0;
  std::uint32_t samples_per_class = 0;
  std::uint32_t dim = 0;
  double class_center_scale = 1.0;
  double within_sigma = 0.1;
};

// Loads labeled vectors; all rows must share one dimension.
std::vector<FeatureVector> load_features(const std::filesystem::path& path,
                                         FeatureFormat format);
std::vector<FeatureVector> parse_features_csv(const std::string& text);
std::vector<FeatureVector> parse_features_packed(
    const std::vector<std::uint8_t>& bytes);

// Canonical writers; write_features(load_features(f)) is byte-stable.
std::string format_features_csv(const std::vector<FeatureVector>& vectors);
std::vector<std::uint8_t> format_features_packed(
    const std::vector<FeatureVector>& vectors);
void write_features(const std::filesystem::path& path,
                    const std::vector<FeatureVector>& vectors,
                    FeatureFormat format);

// Deterministic in spec.seed. Draw order per class: dim normals for the
// center, then samples_per_class * dim normals for the noise, class by
// class. Labels are "class_0", "class_1", ...
// within_sigma >= class_center_scale is tolerated with a warning flag via
// synth_classes_checked; the plain call just generates.
std::vector<FeatureVector> synth_classes(const SynthSpec& spec);

struct SynthResult {
  std::vector<FeatureVector> vectors;
  bool separability_warning = false;
};
SynthResult synth_classes_checked(const SynthSpec& spec);

// Integer match score in [0, scale]: round(scale * max(0, cosine(a, b))).
// Symmetric, invariant under positive scaling of either argument; returns 0
// when either vector is zero.
int real_match_score(const std::vector<double>& a, const std::vector<double>& b,
                     int scale);

}  // namespace bdatp
