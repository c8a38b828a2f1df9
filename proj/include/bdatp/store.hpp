#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bdatp/pipeline.hpp"

namespace bdatp {

// File-backed template store. One record file per user under records/,
// filename = first 16 bytes of SHA-256(user_id) in hex; index.json maps
// user ids to files and registry.json tracks salted hashes of assigned
// target messages so distinct users always receive distinct targets.
//
// Concurrency: single-writer, multi-reader. enroll/revoke hold the store
// write lock (flock on store.lock) plus a per-user lock; verify reads
// without locking and relies on atomic rename for consistency.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Trains and persists a record. Fails with DuplicateError when the user
  // exists and overwrite is false; CapacityError when the target registry
  // is exhausted for this code. Non-convergence is reported in the result,
  // not an error.
  EnrollResult enroll(const std::string& user_id,
                      const std::vector<FeatureVector>& training,
                      const StageConfig& config, const EnrollSeeds& seeds,
                      bool overwrite = false,
                      std::optional<std::int64_t> created_at = std::nullopt);

  // Reissue under fresh randomness: new projection seed, new target, new
  // commitment. NotFoundError when the user is not enrolled.
  EnrollResult revoke(const std::string& user_id,
                      const std::vector<FeatureVector>& training,
                      const StageConfig& config, const EnrollSeeds& seeds,
                      std::optional<std::int64_t> created_at = std::nullopt);

  // NotFoundError when unknown -- never a reject.
  VerifyResult verify(const std::string& user_id,
                      const std::vector<double>& query) const;
  VerifyResult verify(const std::string& user_id, const FeatureVector& query) const;

  bool exists(const std::string& user_id) const;
  TemplateRecord load_record(const std::string& user_id) const;
  std::vector<std::string> list_users() const;
  std::filesystem::path record_path(const std::string& user_id) const;

 private:
  EnrollResult enroll_locked(const std::string& user_id,
                             const std::vector<FeatureVector>& training,
                             const StageConfig& config, const EnrollSeeds& seeds,
                             bool overwrite, bool must_exist,
                             std::optional<std::int64_t> created_at);

  std::filesystem::path root_;
};

// Write-to-temp plus atomic rename; a crash mid-write never exposes a
// partial file under the final name.
void atomic_write_file(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes);

}  // namespace bdatp
