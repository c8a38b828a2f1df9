#include "bdatp/record.hpp"

#include "bdatp/wire.hpp"

namespace bdatp {

namespace {
constexpr char kMagic[4] = {'B', 'D', 'A', 'T'};
constexpr std::uint8_t kVersion = 1;
}  // namespace

void StageConfig::validate() const {
  if (d == 0 || k == 0) throw InvalidArgument("config: d and k must be > 0");
  if (k > d) throw InvalidArgument("config: k must be <= d");
  if (code_m < 3 || code_m > 10)
    throw InvalidArgument("config: code_m must be in [3, 10]");
  if (code_t < 1) throw InvalidArgument("config: code_t must be >= 1");
  if (block_n() < code_m * code_t + 1)
    throw InvalidArgument("config: code_t too large for code_m");
  if (blocks == 0) throw InvalidArgument("config: blocks must be >= 1");
  if (perceptron.rate <= 0) throw InvalidArgument("config: rate must be > 0");
  if (score_scale == 0) throw InvalidArgument("config: score_scale must be > 0");
}

BinaryTemplate binarize(const StoredModel& model, const std::vector<double>& query) {
  if (query.size() != model.k)
    throw InvalidArgument("binarize: query length mismatch");
  BinaryTemplate out{BitVec(model.n_total), ""};
  for (std::size_t j = 0; j < model.n_total; ++j) {
    const double* w = model.weights.data() + j * model.k;
    double activation = model.biases[j];
    for (std::size_t i = 0; i < model.k; ++i) activation += w[i] * query[i];
    out.bits.set(j, activation > 0 ? 1 : 0);
  }
  return out;
}

bool TemplateRecord::operator==(const TemplateRecord& other) const {
  return serialize_record(*this) == serialize_record(other);
}

std::vector<std::uint8_t> serialize_record(const TemplateRecord& record) {
  wire::Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u8(record.version);

  auto meta = w.begin_section();
  w.str16(record.user_id);
  w.i64(record.created_at);
  w.end_section(meta);

  auto config = w.begin_section();
  w.u32(record.config.d);
  w.u32(record.config.k);
  w.u32(record.config.code_m);
  w.u32(record.config.code_t);
  w.u32(record.config.blocks);
  w.u32(record.config.perceptron.epochs);
  w.f64(record.config.perceptron.rate);
  w.u32(record.config.score_scale);
  w.u32(record.config.cohort_classes);
  w.end_section(config);

  auto seed = w.begin_section();
  w.u64(record.projection_seed);
  w.end_section(seed);

  auto model = w.begin_section();
  w.str16(record.model.class_id);
  w.u32(record.model.n_total);
  w.u32(record.model.k);
  for (double v : record.model.weights) w.f64(v);
  for (double v : record.model.biases) w.f64(v);
  w.u32(record.model.train_meta.epochs_run);
  w.u8(record.model.train_meta.converged ? 1 : 0);
  w.u32(record.model.train_meta.residual_bit_errors);
  w.end_section(model);

  auto commits = w.begin_section();
  w.u32(static_cast<std::uint32_t>(record.commitments.size()));
  for (const auto& c : record.commitments) {
    w.str16(c.code_ref);
    w.bitvec(c.mask);
    w.raw(c.salt.data(), c.salt.size());
    w.raw(c.digest.data(), c.digest.size());
  }
  w.end_section(commits);

  w.append_crc32_trailer();
  return std::move(w).take();
}

TemplateRecord deserialize_record(const std::vector<std::uint8_t>& bytes) {
  if (bytes.empty()) throw ParseError("record: empty input");
  wire::Reader r(bytes, "record");
  r.expect_magic(kMagic, sizeof kMagic);
  std::uint8_t version = r.u8();
  if (version != kVersion)
    throw ParseError("record: unsupported version " + std::to_string(version));
  r.check_crc32_trailer();

  TemplateRecord record;
  record.version = version;

  auto meta = r.begin_section();
  record.user_id = r.str16();
  record.created_at = r.i64();
  r.end_section(meta);

  auto config = r.begin_section();
  record.config.d = r.u32();
  record.config.k = r.u32();
  record.config.code_m = r.u32();
  record.config.code_t = r.u32();
  record.config.blocks = r.u32();
  record.config.perceptron.epochs = r.u32();
  record.config.perceptron.rate = r.f64();
  record.config.score_scale = r.u32();
  record.config.cohort_classes = r.u32();
  r.end_section(config);

  auto seed = r.begin_section();
  record.projection_seed = r.u64();
  r.end_section(seed);

  auto model = r.begin_section();
  record.model.class_id = r.str16();
  record.model.n_total = r.u32();
  record.model.k = r.u32();
  if (record.model.n_total > (1u << 20) || record.model.k > (1u << 20))
    throw ParseError("record: implausible model dimensions");
  record.model.weights.resize(std::size_t(record.model.n_total) * record.model.k);
  for (auto& v : record.model.weights) v = r.f64();
  record.model.biases.resize(record.model.n_total);
  for (auto& v : record.model.biases) v = r.f64();
  record.model.train_meta.epochs_run = r.u32();
  record.model.train_meta.converged = r.u8() != 0;
  record.model.train_meta.residual_bit_errors = r.u32();
  r.end_section(model);

  auto commits = r.begin_section();
  std::uint32_t count = r.u32();
  if (count > (1u << 16)) throw ParseError("record: implausible block count");
  record.commitments.resize(count);
  for (auto& c : record.commitments) {
    c.code_ref = r.str16();
    c.mask = r.bitvec();
    for (auto& b : c.salt) b = r.u8();
    for (auto& b : c.digest) b = r.u8();
  }
  r.end_section(commits);
  r.expect_end_before_trailer();

  // Cross-field consistency; a record that parses must also make sense.
  try {
    record.config.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("record: invalid config: ") + e.what());
  }
  if (record.model.n_total != record.config.n_total() ||
      record.model.k != record.config.k ||
      record.commitments.size() != record.config.blocks)
    throw ParseError("record: inconsistent dimensions");
  for (const auto& c : record.commitments)
    if (c.mask.size() != record.config.block_n())
      throw ParseError("record: inconsistent mask length");
  return record;
}

}  // namespace bdatp
