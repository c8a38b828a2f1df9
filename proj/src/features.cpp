#include "bdatp/features.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bdatp/rng.hpp"
#include "bdatp/wire.hpp"

namespace bdatp {

namespace {

double parse_value(const std::string& cell, std::size_t row, std::size_t col) {
  double out = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    throw ParseError("row " + std::to_string(row) + ", column " +
                     std::to_string(col) + ": not a number: '" + cell + "'");
  if (!std::isfinite(out))
    throw ParseError("row " + std::to_string(row) + ", column " +
                     std::to_string(col) + ": non-finite value");
  return out;
}

std::string format_value(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

constexpr char kPackedMagic[4] = {'B', 'D', 'F', 'V'};

}  // namespace

std::vector<FeatureVector> parse_features_csv(const std::string& text) {
  std::vector<FeatureVector> out;
  std::size_t dim = 0;
  std::size_t row = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    FeatureVector fv;
    std::size_t pos = 0;
    std::size_t col = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string cell = line.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (col == 0) {
        if (cell.empty())
          throw ParseError("row " + std::to_string(row) + ": empty label");
        fv.label = cell;
      } else {
        fv.values.push_back(parse_value(cell, row, col));
      }
      ++col;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fv.values.empty())
      throw ParseError("row " + std::to_string(row) + ": no values");
    if (dim == 0) {
      dim = fv.values.size();
    } else if (fv.values.size() != dim) {
      throw ParseError("row " + std::to_string(row) + ": ragged row, got " +
                       std::to_string(fv.values.size()) + " values, expected " +
                       std::to_string(dim));
    }
    out.push_back(std::move(fv));
  }
  if (out.empty()) throw ParseError("empty feature file");
  return out;
}

std::string format_features_csv(const std::vector<FeatureVector>& vectors) {
  std::string out;
  for (const auto& fv : vectors) {
    out += fv.label;
    for (double v : fv.values) {
      out += ',';
      out += format_value(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<FeatureVector> parse_features_packed(
    const std::vector<std::uint8_t>& bytes) {
  wire::Reader r(bytes, "feature file");
  r.expect_magic(kPackedMagic, sizeof kPackedMagic);
  std::uint8_t version = r.u8();
  if (version != 1)
    throw ParseError("feature file: unsupported version " +
                     std::to_string(version));
  r.check_crc32_trailer();
  std::uint32_t dim = r.u32();
  std::uint32_t count = r.u32();
  if (dim == 0 || count == 0) throw ParseError("feature file: empty");
  std::vector<FeatureVector> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    FeatureVector fv;
    fv.label = r.str16();
    if (fv.label.empty()) throw ParseError("feature file: empty label");
    fv.values.resize(dim);
    for (auto& v : fv.values) {
      v = r.f64();
      if (!std::isfinite(v)) throw ParseError("feature file: non-finite value");
    }
    out.push_back(std::move(fv));
  }
  r.expect_end_before_trailer();
  return out;
}

std::vector<std::uint8_t> format_features_packed(
    const std::vector<FeatureVector>& vectors) {
  if (vectors.empty()) throw InvalidArgument("format_features_packed: empty");
  std::size_t dim = vectors.front().values.size();
  for (const auto& fv : vectors)
    if (fv.values.size() != dim)
      throw InvalidArgument("format_features_packed: ragged vectors");
  wire::Writer w;
  w.raw(kPackedMagic, sizeof kPackedMagic);
  w.u8(1);
  w.u32(static_cast<std::uint32_t>(dim));
  w.u32(static_cast<std::uint32_t>(vectors.size()));
  for (const auto& fv : vectors) {
    w.str16(fv.label);
    for (double v : fv.values) w.f64(v);
  }
  w.append_crc32_trailer();
  return std::move(w).take();
}

std::vector<FeatureVector> load_features(const std::filesystem::path& path,
                                         FeatureFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (text.empty()) throw ParseError("empty feature file: " + path.string());
  if (format == FeatureFormat::kCsv) return parse_features_csv(text);
  return parse_features_packed(
      std::vector<std::uint8_t>(text.begin(), text.end()));
}

void write_features(const std::filesystem::path& path,
                    const std::vector<FeatureVector>& vectors,
                    FeatureFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  if (format == FeatureFormat::kCsv) {
    out << format_features_csv(vectors);
  } else {
    auto bytes = format_features_packed(vectors);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw IoError("short write to " + path.string());
}

SynthResult synth_classes_checked(const SynthSpec& spec) {
  if (spec.num_classes == 0 || spec.samples_per_class == 0 || spec.dim == 0)
    throw InvalidArgument("synth_classes: classes, samples and dim must be > 0");
  if (spec.class_center_scale <= 0 || spec.within_sigma < 0)
    throw InvalidArgument("synth_classes: bad spread parameters");
  SynthResult result;
  result.separability_warning = spec.within_sigma >= spec.class_center_scale;
  SeededRng rng(spec.seed);
  result.vectors.reserve(
      static_cast<std::size_t>(spec.num_classes) * spec.samples_per_class);
  for (std::uint32_t c = 0; c < spec.num_classes; ++c) {
    std::vector<double> center(spec.dim);
    for (auto& x : center) x = spec.class_center_scale * rng.normal();
    std::string label = "class_" + std::to_string(c);
    for (std::uint32_t s = 0; s < spec.samples_per_class; ++s) {
      FeatureVector fv;
      fv.label = label;
      fv.values.resize(spec.dim);
      for (std::uint32_t i = 0; i < spec.dim; ++i)
        fv.values[i] = center[i] + spec.within_sigma * rng.normal();
      result.vectors.push_back(std::move(fv));
    }
  }
  return result;
}

std::vector<FeatureVector> synth_classes(const SynthSpec& spec) {
  return synth_classes_checked(spec).vectors;
}

int real_match_score(const std::vector<double>& a, const std::vector<double>& b,
                     int scale) {
  if (a.size() != b.size())
    throw InvalidArgument("real_match_score: length mismatch");
  if (scale <= 0) throw InvalidArgument("real_match_score: scale must be > 0");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0;
  double cosine = dot / (std::sqrt(na) * std::sqrt(nb));
  if (cosine < 0) cosine = 0;
  if (cosine > 1) cosine = 1;  // guard rounding overshoot
  return static_cast<int>(std::llround(scale * cosine));
}

}  // namespace bdatp
