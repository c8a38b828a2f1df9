#include "bdatp/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <random>

#include <json.hpp>

#include "bdatp/commitment.hpp"
#include "bdatp/rng.hpp"

namespace bdatp {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_hex(const std::uint8_t* data, std::size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xF]);
  }
  return out;
}

std::string user_file_stem(const std::string& user_id) {
  auto digest = sha256(reinterpret_cast<const std::uint8_t*>(user_id.data()),
                       user_id.size());
  return to_hex(digest.data(), 16);
}

// flock-based advisory lock, released on destruction.
class FileLock {
 public:
  explicit FileLock(const fs::path& path) {
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError("cannot open lock file " + path.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw IoError("cannot lock " + path.string());
    }
  }
  ~FileLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

json load_json(const fs::path& path, const json& fallback) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return fallback;
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_json(const fs::path& path, const json& value) {
  std::string text = value.dump(2);
  text.push_back('\n');
  atomic_write_file(path,
                    std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

std::string registry_hash(const std::string& salt_hex, const BitVec& message) {
  auto packed = message.to_packed_bytes();
  std::vector<std::uint8_t> buf(salt_hex.begin(), salt_hex.end());
  buf.insert(buf.end(), packed.begin(), packed.end());
  auto digest = sha256(buf.data(), buf.size());
  return to_hex(digest.data(), digest.size());
}

std::string fresh_salt_hex() {
  std::random_device rd;
  std::uint8_t salt[16];
  for (auto& b : salt) b = static_cast<std::uint8_t>(rd());
  return to_hex(salt, sizeof salt);
}

}  // namespace

void atomic_write_file(const fs::path& path,
                       const std::vector<std::uint8_t>& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

Store::Store(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "records");
  fs::create_directories(root_ / "locks");
}

fs::path Store::record_path(const std::string& user_id) const {
  return root_ / "records" / (user_file_stem(user_id) + ".rec");
}

bool Store::exists(const std::string& user_id) const {
  json index = load_json(root_ / "index.json", json{{"version", 1}, {"users", json::object()}});
  return index["users"].contains(user_id);
}

std::vector<std::string> Store::list_users() const {
  json index = load_json(root_ / "index.json", json{{"version", 1}, {"users", json::object()}});
  std::vector<std::string> out;
  for (auto& [user, entry] : index["users"].items()) out.push_back(user);
  return out;
}

TemplateRecord Store::load_record(const std::string& user_id) const {
  json index = load_json(root_ / "index.json", json{{"version", 1}, {"users", json::object()}});
  if (!index["users"].contains(user_id))
    throw NotFoundError("user '" + user_id + "' is not enrolled");
  fs::path file = root_ / "records" /
                  index["users"][user_id].at("file").get<std::string>();
  return deserialize_record(read_file(file));
}

VerifyResult Store::verify(const std::string& user_id,
                           const std::vector<double>& query) const {
  return verify_record(load_record(user_id), query);
}

VerifyResult Store::verify(const std::string& user_id,
                           const FeatureVector& query) const {
  return verify(user_id, query.values);
}

EnrollResult Store::enroll(const std::string& user_id,
                           const std::vector<FeatureVector>& training,
                           const StageConfig& config, const EnrollSeeds& seeds,
                           bool overwrite,
                           std::optional<std::int64_t> created_at) {
  return enroll_locked(user_id, training, config, seeds, overwrite,
                       /*must_exist=*/false, created_at);
}

EnrollResult Store::revoke(const std::string& user_id,
                           const std::vector<FeatureVector>& training,
                           const StageConfig& config, const EnrollSeeds& seeds,
                           std::optional<std::int64_t> created_at) {
  return enroll_locked(user_id, training, config, seeds, /*overwrite=*/true,
                       /*must_exist=*/true, created_at);
}

EnrollResult Store::enroll_locked(const std::string& user_id,
                                  const std::vector<FeatureVector>& training,
                                  const StageConfig& config,
                                  const EnrollSeeds& seeds, bool overwrite,
                                  bool must_exist,
                                  std::optional<std::int64_t> created_at) {
  config.validate();
  if (user_id.empty()) throw InvalidArgument("enroll: empty user id");

  FileLock store_lock(root_ / "store.lock");
  FileLock user_lock(root_ / "locks" / (user_file_stem(user_id) + ".lock"));

  json index = load_json(root_ / "index.json",
                         json{{"version", 1}, {"users", json::object()}});
  bool present = index["users"].contains(user_id);
  if (must_exist && !present)
    throw NotFoundError("user '" + user_id + "' is not enrolled");
  if (present && !overwrite)
    throw DuplicateError("user '" + user_id +
                         "' is already enrolled (pass overwrite to replace)");

  json registry = load_json(
      root_ / "registry.json",
      json{{"version", 1}, {"salt", fresh_salt_hex()}, {"entries", json::array()}});
  const std::string salt_hex = registry.at("salt").get<std::string>();

  CodeParams params = build_code(static_cast<int>(config.code_m),
                                 static_cast<int>(config.code_t));
  std::size_t message_bits = std::size_t(params.k_msg) * config.blocks;
  if (message_bits < 64) {
    std::uint64_t capacity = std::uint64_t{1} << message_bits;
    if (registry["entries"].size() >= capacity)
      throw CapacityError("target registry exhausted: only 2^" +
                          std::to_string(message_bits) +
                          " distinct targets exist for " + params.ref());
  }

  // Deterministic draw with rejection against every target ever assigned.
  // Same stream enroll_record would use, so a fresh store reproduces the
  // registry-free enrollment bit for bit.
  SeededRng rng(target_message_seed(seeds.targets));
  BitVec message;
  std::string message_hash;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 1'000'000)
      throw CapacityError("target registry: no free target found");
    message = rng.bits(message_bits);
    message_hash = registry_hash(salt_hex, message);
    bool taken = false;
    for (const auto& entry : registry["entries"])
      if (entry.at("hash").get<std::string>() == message_hash) {
        taken = true;
        break;
      }
    if (!taken) break;
  }

  EnrollResult result =
      enroll_record(user_id, training, config, seeds, created_at, message);

  std::string file = user_file_stem(user_id) + ".rec";
  atomic_write_file(root_ / "records" / file,
                    serialize_record(result.record));

  registry["entries"].push_back(json{{"user", user_id}, {"hash", message_hash}});
  save_json(root_ / "registry.json", registry);

  index["users"][user_id] = json{{"file", file}};
  save_json(root_ / "index.json", index);
  return result;
}

}  // namespace bdatp
