#include "bdatp/bda.hpp"

namespace bdatp {

std::map<std::string, Codeword> assign_targets(
    const std::vector<std::string>& class_ids, const CodeParams& params,
    std::uint64_t seed) {
  for (const auto& id : class_ids)
    if (id.empty()) throw InvalidArgument("assign_targets: empty class id");
  auto codewords = random_codewords(params, class_ids.size(), seed);
  std::map<std::string, Codeword> out;
  for (std::size_t i = 0; i < class_ids.size(); ++i) {
    if (!out.emplace(class_ids[i], codewords[i]).second)
      throw InvalidArgument("assign_targets: duplicate class id '" +
                            class_ids[i] + "'");
  }
  return out;
}

ClassModel train_class(const std::string& class_id,
                       const std::vector<RealTemplate>& samples,
                       const BitVec& target, const std::string& code_ref,
                       const PerceptronHyper& hyper,
                       const std::vector<CohortExample>& cohort) {
  if (samples.empty()) throw InvalidArgument("train_class: no samples");
  std::size_t k = samples.front().values.size();
  for (const auto& s : samples)
    if (s.values.size() != k)
      throw InvalidArgument("train_class: sample dimension mismatch");
  std::size_t n = target.size();
  if (n == 0) throw InvalidArgument("train_class: empty target");
  for (const auto& c : cohort)
    if (c.sample.values.size() != k || c.target.size() != n)
      throw InvalidArgument("train_class: cohort dimension mismatch");

  ClassModel model;
  model.class_id = class_id;
  model.n_total = static_cast<std::uint32_t>(n);
  model.k = static_cast<std::uint32_t>(k);
  model.weights.assign(n * k, 0.0);
  model.biases.assign(n, 0.0);
  model.target = target;
  model.code_ref = code_ref;

  auto visit = [&](const double* x, const BitVec& bits) {
    bool updated = false;
    for (std::size_t j = 0; j < n; ++j) {
      double* w = model.weights.data() + j * k;
      double activation = model.biases[j];
      for (std::size_t i = 0; i < k; ++i) activation += w[i] * x[i];
      int predicted = activation > 0 ? 1 : 0;
      if (predicted == bits[j]) continue;
      double label = bits[j] ? 1.0 : -1.0;
      for (std::size_t i = 0; i < k; ++i) w[i] += hyper.rate * label * x[i];
      model.biases[j] += hyper.rate * label;
      updated = true;
    }
    return updated;
  };

  for (std::uint32_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    bool updated = false;
    for (const auto& sample : samples)
      updated = visit(sample.values.data(), target) || updated;
    for (const auto& c : cohort)
      updated = visit(c.sample.values.data(), c.target) || updated;
    model.train_meta.epochs_run = epoch + 1;
    if (!updated) break;
  }

  std::uint32_t residual = 0;
  for (const auto& sample : samples) {
    auto bits = binarize(model, sample).bits;
    residual += static_cast<std::uint32_t>(hamming(bits, target));
  }
  model.train_meta.residual_bit_errors = residual;
  model.train_meta.converged = residual == 0;
  return model;
}

BinaryTemplate binarize(const ClassModel& model, const std::vector<double>& query) {
  if (query.size() != model.k)
    throw InvalidArgument("binarize: query length " +
                          std::to_string(query.size()) + " != k " +
                          std::to_string(model.k));
  BinaryTemplate out{BitVec(model.n_total), model.code_ref};
  for (std::size_t j = 0; j < model.n_total; ++j) {
    const double* w = model.weights.data() + j * model.k;
    double activation = model.biases[j];
    for (std::size_t i = 0; i < model.k; ++i) activation += w[i] * query[i];
    out.bits.set(j, activation > 0 ? 1 : 0);
  }
  return out;
}

BinaryTemplate binarize(const ClassModel& model, const RealTemplate& query) {
  return binarize(model, query.values);
}

int binary_match_score(const BitVec& a, const BitVec& b) {
  return static_cast<int>(a.size() - hamming(a, b));
}

int binary_match_score(const BinaryTemplate& a, const BinaryTemplate& b) {
  return binary_match_score(a.bits, b.bits);
}

}  // namespace bdatp
