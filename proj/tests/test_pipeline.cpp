#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

#include "bdatp/rng.hpp"
#include "bdatp/store.hpp"

using namespace bdatp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / (name + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// One synthetic class worth of training data plus a held-out probe.
struct ClassData {
  std::vector<FeatureVector> training;
  FeatureVector probe;
};

ClassData make_class_data(std::uint64_t seed, const std::string& label,
                          std::uint32_t d, double sigma = 0.15) {
  SynthSpec spec{seed, 1, 11, d, 1.0, sigma};
  auto vectors = synth_classes(spec);
  ClassData data;
  data.training.assign(vectors.begin(), vectors.end() - 1);
  for (auto& fv : data.training) fv.label = label;
  data.probe = vectors.back();
  data.probe.label = label;
  return data;
}

StageConfig small_config() {
  StageConfig config;
  config.d = 32;
  config.k = 16;
  config.code_m = 4;
  config.code_t = 2;
  config.cohort_classes = 6;
  return config;
}

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

bool contains_subsequence(const std::vector<std::uint8_t>& haystack,
                          const std::vector<std::uint8_t>& needle) {
  if (needle.empty() || haystack.size() < needle.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i)
    if (std::memcmp(haystack.data() + i, needle.data(), needle.size()) == 0)
      return true;
  return false;
}

}  // namespace

TEST_CASE("record serialization round-trips field-identically") {
  auto data = make_class_data(3, "rt", 32);
  auto enrolled = enroll_record("rt_user", data.training, small_config(),
                                EnrollSeeds{1, 2, 3}, 1700000000);
  auto bytes = serialize_record(enrolled.record);
  auto back = deserialize_record(bytes);
  CHECK(back == enrolled.record);
  CHECK(back.user_id == "rt_user");
  CHECK(back.created_at == 1700000000);
  CHECK(back.projection_seed == 1);
  CHECK(serialize_record(back) == bytes);
}

TEST_CASE("record parse errors are distinct and loud") {
  auto data = make_class_data(4, "pe", 32);
  auto record = enroll_record("pe_user", data.training, small_config(),
                              EnrollSeeds{1, 2, 3}, 0)
                    .record;
  auto bytes = serialize_record(record);

  CHECK_THROWS_WITH_AS(deserialize_record({}), "record: empty input", ParseError);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_WITH_AS(deserialize_record(bad_magic), "record: bad magic",
                       ParseError);

  auto bad_version = bytes;
  bad_version[4] = 9;
  CHECK_THROWS_AS(deserialize_record(bad_version), ParseError);

  auto truncated = bytes;
  truncated.resize(truncated.size() / 2);
  CHECK_THROWS_AS(deserialize_record(truncated), ParseError);

  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(deserialize_record(trailing), ParseError);

  auto flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  CHECK_THROWS_AS(deserialize_record(flipped), ParseError);
}

TEST_CASE("every single-byte corruption fails to parse") {
  auto data = make_class_data(5, "fz", 32);
  auto record = enroll_record("fz_user", data.training, small_config(),
                              EnrollSeeds{4, 5, 6}, 0)
                    .record;
  auto bytes = serialize_record(record);
  SeededRng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    auto corrupt = bytes;
    std::size_t pos = rng.uniform_below(bytes.size());
    std::uint8_t flip =
        static_cast<std::uint8_t>(1 + rng.uniform_below(255));
    corrupt[pos] ^= flip;
    CHECK_THROWS_AS(deserialize_record(corrupt), ParseError);
  }
}

TEST_CASE("enrollment is deterministic given seeds and timestamp") {
  auto data = make_class_data(6, "det", 32);
  auto a = enroll_record("det_user", data.training, small_config(),
                         EnrollSeeds{7, 8, 9}, 42);
  auto b = enroll_record("det_user", data.training, small_config(),
                         EnrollSeeds{7, 8, 9}, 42);
  CHECK(serialize_record(a.record) == serialize_record(b.record));
  CHECK(a.committed_template == b.committed_template);
}

TEST_CASE("enroll validates inputs") {
  auto config = small_config();
  auto data = make_class_data(7, "val", 32);
  CHECK_THROWS_AS(
      enroll_record("", data.training, config, EnrollSeeds{1, 2, 3}),
      InvalidArgument);
  CHECK_THROWS_AS(enroll_record("u", {}, config, EnrollSeeds{1, 2, 3}),
                  InvalidArgument);
  auto mixed = data.training;
  mixed[2].label = "other";
  CHECK_THROWS_AS(enroll_record("u", mixed, config, EnrollSeeds{1, 2, 3}),
                  InvalidArgument);
  auto short_dim = data.training;
  short_dim[0].values.pop_back();
  CHECK_THROWS_AS(enroll_record("u", short_dim, config, EnrollSeeds{1, 2, 3}),
                  InvalidArgument);
}

TEST_CASE("enroll then verify: training samples and probes accept, strangers reject") {
  auto config = small_config();
  auto data = make_class_data(8, "acc", 32);
  auto enrolled =
      enroll_record("acc_user", data.training, config, EnrollSeeds{10, 11, 12});
  REQUIRE(enrolled.converged);

  auto self = verify_record(enrolled.record, data.training.front());
  CHECK(self.accept);
  for (const auto& e : self.block_errors) {
    REQUIRE(e.has_value());
    CHECK(*e == 0);
  }
  CHECK(verify_record(enrolled.record, data.probe).accept);

  auto stranger = make_class_data(9, "other", 32);
  CHECK_FALSE(verify_record(enrolled.record, stranger.probe).accept);

  CHECK_THROWS_AS(
      verify_record(enrolled.record, std::vector<double>(31, 0.0)),
      InvalidArgument);
}

TEST_CASE("single-sample enrollment round-trips with zero errors") {
  auto config = small_config();
  auto data = make_class_data(10, "one", 32);
  std::vector<FeatureVector> single{data.training.front()};
  auto enrolled = enroll_record("one_user", single, config, EnrollSeeds{1, 2, 3});
  REQUIRE(enrolled.converged);
  auto result = verify_record(enrolled.record, single.front());
  CHECK(result.accept);
  for (const auto& e : result.block_errors) CHECK(e.value_or(-1) == 0);
}

TEST_CASE("multi-block configuration verifies per block") {
  auto config = small_config();
  config.blocks = 3;
  auto data = make_class_data(11, "blocks", 32);
  auto enrolled =
      enroll_record("blk_user", data.training, config, EnrollSeeds{3, 4, 5});
  REQUIRE(enrolled.record.commitments.size() == 3);
  CHECK(enrolled.committed_template.size() == 45);
  auto result = verify_record(enrolled.record, data.probe);
  CHECK(result.block_errors.size() == 3);
  CHECK(result.accept);

  auto stranger = make_class_data(12, "blk_other", 32);
  auto rejected = verify_record(enrolled.record, stranger.probe);
  CHECK_FALSE(rejected.accept);
}

TEST_CASE("the serialized record leaks neither the template nor raw features") {
  StageConfig config;  // default desk config, n=63 packs to 8 bytes
  auto data = make_class_data(13, "leak", config.d);
  auto enrolled =
      enroll_record("leak_user", data.training, config, EnrollSeeds{6, 7, 8});
  REQUIRE(enrolled.converged);
  auto bytes = serialize_record(enrolled.record);

  CHECK_FALSE(contains_subsequence(
      bytes, enrolled.committed_template.to_packed_bytes()));
  CHECK_FALSE(contains_subsequence(bytes, enrolled.target.to_packed_bytes()));
  for (const auto& fv : data.training) {
    std::vector<std::uint8_t> raw(fv.values.size() * 8);
    std::memcpy(raw.data(), fv.values.data(), raw.size());
    CHECK_FALSE(contains_subsequence(bytes, raw));
    // Individual coordinates must not appear either.
    for (std::size_t i = 0; i < fv.values.size(); i += 16) {
      std::vector<std::uint8_t> one(8);
      std::memcpy(one.data(), &fv.values[i], 8);
      CHECK_FALSE(contains_subsequence(bytes, one));
    }
  }
}

TEST_CASE("store: enroll, verify, duplicate, unknown-user contracts") {
  TempDir dir("bdatp_store_basic");
  Store store(dir.path);
  auto config = small_config();
  auto data = make_class_data(14, "alice", 32);

  CHECK_FALSE(store.exists("alice"));
  auto enrolled =
      store.enroll("alice", data.training, config, EnrollSeeds{1, 2, 3});
  CHECK(store.exists("alice"));
  CHECK(store.list_users() == std::vector<std::string>{"alice"});

  CHECK(store.verify("alice", data.probe).accept);
  CHECK_THROWS_AS(store.verify("bob", data.probe), NotFoundError);

  CHECK_THROWS_AS(
      store.enroll("alice", data.training, config, EnrollSeeds{1, 2, 3}),
      DuplicateError);
  try {
    store.enroll("alice", data.training, config, EnrollSeeds{1, 2, 3});
    FAIL("expected DuplicateError");
  } catch (const DuplicateError& e) {
    CHECK(std::string(e.what()).find("alice") != std::string::npos);
  }
  // Overwrite is explicit.
  auto replaced = store.enroll("alice", data.training, config,
                               EnrollSeeds{2, 3, 4}, /*overwrite=*/true);
  CHECK(replaced.record.projection_seed == 2);
}

TEST_CASE("store: fixed seeds and timestamp give byte-identical record files") {
  auto config = small_config();
  auto data = make_class_data(15, "carol", 32);
  std::vector<std::uint8_t> first, second;
  {
    TempDir dir("bdatp_store_det1");
    Store store(dir.path);
    store.enroll("carol", data.training, config, EnrollSeeds{5, 6, 7}, false, 99);
    first = read_bytes(store.record_path("carol"));
  }
  {
    TempDir dir("bdatp_store_det2");
    Store store(dir.path);
    store.enroll("carol", data.training, config, EnrollSeeds{5, 6, 7}, false, 99);
    second = read_bytes(store.record_path("carol"));
  }
  CHECK(first == second);
}

TEST_CASE("store: registry forces distinct targets even with identical seeds") {
  TempDir dir("bdatp_store_registry");
  Store store(dir.path);
  auto config = small_config();
  auto a = make_class_data(16, "u1", 32);
  auto b = make_class_data(17, "u2", 32);
  // Same targets seed: the registry's rejection loop must still hand the
  // second user a different codeword.
  auto r1 = store.enroll("u1", a.training, config, EnrollSeeds{1, 77, 2});
  auto r2 = store.enroll("u2", b.training, config, EnrollSeeds{3, 77, 4});
  CHECK(r1.target != r2.target);
  CHECK(hamming(r1.target, r2.target) >= std::size_t(config.code_t) * 2 + 1);
}

TEST_CASE("store: capacity error once the code's codewords are exhausted") {
  TempDir dir("bdatp_store_capacity");
  Store store(dir.path);
  StageConfig config;
  config.d = 16;
  config.k = 8;
  config.code_m = 3;  // BCH(7,4): 16 codewords
  config.code_t = 1;
  config.cohort_classes = 4;
  for (int u = 0; u < 16; ++u) {
    auto data = make_class_data(100 + std::uint64_t(u), "u", 16);
    store.enroll("user_" + std::to_string(u), data.training, config,
                 EnrollSeeds{std::uint64_t(u), std::uint64_t(u), 1});
  }
  auto extra = make_class_data(200, "u", 16);
  CHECK_THROWS_AS(
      store.enroll("user_16", extra.training, config, EnrollSeeds{50, 50, 50}),
      CapacityError);
}

TEST_CASE("revoke: fresh randomness, unlinkable templates, old-era rejection") {
  TempDir dir("bdatp_store_revoke");
  Store store(dir.path);
  StageConfig config;  // default, n=63
  auto data = make_class_data(18, "dave", config.d);

  CHECK_THROWS_AS(
      store.revoke("dave", data.training, config, EnrollSeeds{1, 2, 3}),
      NotFoundError);

  auto old_era =
      store.enroll("dave", data.training, config, EnrollSeeds{21, 22, 23});
  auto old_record = store.load_record("dave");
  auto new_era =
      store.revoke("dave", data.training, config, EnrollSeeds{31, 32, 33});
  auto new_record = store.load_record("dave");

  CHECK(old_record.projection_seed != new_record.projection_seed);
  CHECK(old_era.target != new_era.target);

  // Genuine user still accepted after reissue.
  CHECK(store.verify("dave", data.probe).accept);

  // Old and new masks decorrelate around n/2.
  double d = double(hamming(old_record.commitments[0].mask,
                            new_record.commitments[0].mask));
  CHECK(d > 63.0 / 2 - 3 * std::sqrt(63.0) / 2);
  CHECK(d < 63.0 / 2 + 3 * std::sqrt(63.0) / 2);

  // The old commitment rejects the new era's binarizations.
  auto params = build_code(6, 5);
  CHECK_FALSE(
      verify_commitment(old_record.commitments[0], params, new_era.committed_template)
          .has_value());
}

TEST_CASE("store ignores stray temp files and loads cleanly around them") {
  TempDir dir("bdatp_store_tmp");
  Store store(dir.path);
  auto config = small_config();
  auto data = make_class_data(19, "erin", 32);
  store.enroll("erin", data.training, config, EnrollSeeds{1, 2, 3});

  // A crashed writer leaves a temp file behind; it must never be visible as
  // a record.
  std::ofstream(dir.path / "records" / "deadbeef.rec.tmp") << "partial";
  Store reopened(dir.path);
  CHECK(reopened.list_users() == std::vector<std::string>{"erin"});
  CHECK(reopened.verify("erin", data.probe).accept);
}

TEST_CASE("atomic_write_file replaces content atomically") {
  TempDir dir("bdatp_atomic");
  auto target = dir.path / "file.bin";
  atomic_write_file(target, {1, 2, 3});
  atomic_write_file(target, {9, 9});
  CHECK(read_bytes(target) == std::vector<std::uint8_t>{9, 9});
  CHECK_FALSE(fs::exists(dir.path / "file.bin.tmp"));
}

TEST_CASE("concurrent verifies against concurrent enrolls stay consistent") {
  TempDir dir("bdatp_store_threads");
  Store store(dir.path);
  auto config = small_config();
  auto alice = make_class_data(20, "alice", 32);
  store.enroll("alice", alice.training, config, EnrollSeeds{1, 2, 3});

  std::atomic<bool> failed{false};
  std::atomic<int> accepts{0};
  std::vector<std::thread> threads;
  for (int reader = 0; reader < 4; ++reader) {
    threads.emplace_back([&] {
      for (int i = 0; i < 25; ++i) {
        try {
          if (store.verify("alice", alice.probe).accept) ++accepts;
        } catch (const std::exception&) {
          failed = true;
        }
      }
    });
  }
  threads.emplace_back([&] {
    for (int u = 0; u < 5; ++u) {
      auto data = make_class_data(300 + std::uint64_t(u), "w", 32);
      try {
        store.enroll("writer_" + std::to_string(u), data.training, config,
                     EnrollSeeds{std::uint64_t(u) + 1, 2, 3});
      } catch (const std::exception&) {
        failed = true;
      }
    }
  });
  for (auto& t : threads) t.join();
  CHECK_FALSE(failed.load());
  CHECK(accepts.load() == 100);
  CHECK(store.list_users().size() == 6);
}

TEST_CASE("target message seeding is forked from the targets seed") {
  auto params = build_code(4, 2);
  auto message = draw_target_message(42, params, 1);
  CHECK(message.size() == 7);
  // Forks differ from each other and from the raw stream.
  CHECK(target_message_seed(42) != cohort_seed(42));
  CHECK(draw_target_message(42, params, 2).size() == 14);
}
