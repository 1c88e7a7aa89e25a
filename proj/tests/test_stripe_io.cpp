#include <gtest/gtest.h>

#include <random>

#include "pmrc/error.hpp"
#include "pmrc/stripe_io.hpp"
#include "temp_dir.hpp"
#include "test_util.hpp"

using namespace pmrc;
namespace fs = std::filesystem;
using testutil::read_file;
using testutil::TempDir;
using testutil::write_random_file;

TEST(ShardHeader, ByteLayout) {
  ShardHeader h;
  h.width = 16;
  h.variant = Variant::Mbr;
  h.construction = Construction::Vanilla;
  h.n = 6;
  h.k = 3;
  h.d = 4;
  h.node_index = 2;
  h.block_size = 0x01020304;
  h.original_length = 0x0A0B0C0D0E0F1011ull;
  h.stripe_count = 0x7;
  h.systematic = true;
  const auto bytes = h.serialize();
  const std::array<std::uint8_t, 33> expected{
      'P', 'M', 'R', 'C', 1, 16, 1, 0, 6, 0, 3, 0, 4, 0, 2, 0, 0x04,
      0x03, 0x02, 0x01, 0x11, 0x10, 0x0F, 0x0E, 0x0D, 0x0C, 0x0B, 0x0A, 7, 0, 0, 0, 1};
  EXPECT_EQ(bytes, expected);
  EXPECT_EQ(ShardHeader::parse(bytes), h);
}

TEST(ShardHeader, RejectsBadHeaders) {
  ShardHeader h;
  h.n = 5;
  h.k = 3;
  h.d = 4;
  h.node_index = 1;
  h.block_size = 64;
  auto good = h.serialize();
  EXPECT_NO_THROW(ShardHeader::parse(good));
  auto bad = good;
  bad[0] = 'X';
  EXPECT_THROW(ShardHeader::parse(bad), FormatError);
  bad = good;
  bad[4] = 2;
  EXPECT_THROW(ShardHeader::parse(bad), FormatError);
  bad = good;
  bad[12] = 3;  // MSR with d != 2k-2
  EXPECT_THROW(ShardHeader::parse(bad), FormatError);
  bad = good;
  bad[14] = 6;  // node index past n
  EXPECT_THROW(ShardHeader::parse(bad), FormatError);
  bad = good;
  bad[5] = 16;
  bad[16] = 63;  // odd block size for 16-bit symbols
  EXPECT_THROW(ShardHeader::parse(bad), FormatError);
  EXPECT_THROW(ShardHeader::parse(std::span(good).first(20)), FormatError);
}

TEST(Stripes, CountsAndPayloadSizes) {
  TempDir dir;
  std::mt19937_64 rng(1);
  const auto code = make_code(CodeParams::msr(3), Construction::Sparse, 8);
  const std::size_t bs = 64;
  const std::size_t stripe = 6 * bs;
  for (std::size_t size : {std::size_t{0}, stripe, stripe + 1, 3 * stripe - 1}) {
    const fs::path in = dir / "in.bin";
    write_random_file(in, size, rng);
    const fs::path out = dir / ("s" + std::to_string(size));
    const auto paths = split_and_encode(in, code, bs, true, out);
    ASSERT_EQ(paths.size(), 5u);
    const auto h = read_shard_header(paths[2]);
    const std::size_t stripes = (size + stripe - 1) / stripe;
    EXPECT_EQ(h.stripe_count, stripes);
    EXPECT_EQ(h.original_length, size);
    EXPECT_EQ(h.node_index, 3);
    EXPECT_EQ(paths[2].filename(), "node_003.shard");
    std::uintmax_t payload = 0;
    for (const auto& p : paths) payload += fs::file_size(p) - ShardHeader::kSize;
    EXPECT_EQ(payload, stripes * 5 * 2 * bs);
  }
}

TEST(Stripes, SystematicShardsHoldTheData) {
  TempDir dir;
  std::mt19937_64 rng(2);
  const auto code = make_code(CodeParams::msr(3), Construction::Sparse, 8);
  write_random_file(dir / "in.bin", 6 * 32, rng);
  const auto paths = split_and_encode(dir / "in.bin", code, 32, true, dir / "s");
  const auto input = read_file(dir / "in.bin");
  for (std::size_t i = 0; i < 3; ++i) {
    const auto shard = read_file(paths[i]);
    EXPECT_TRUE(std::equal(shard.begin() + ShardHeader::kSize, shard.end(),
                           input.begin() + static_cast<std::ptrdiff_t>(i * 64)));
  }
}

TEST(Stripes, RoundTripWithEveryErasurePattern) {
  std::mt19937_64 rng(3);
  struct Setup {
    CodeParams p;
    Construction c;
    unsigned w;
    bool systematic;
  };
  const Setup setups[] = {
      {CodeParams::msr(3), Construction::Sparse, 8, true},
      {CodeParams::msr(3), Construction::Vanilla, 16, false},
      {CodeParams::msr(4), Construction::Sparse, 16, true},
      {CodeParams::make(6, 3, 4, Variant::Mbr), Construction::Vanilla, 8, true},
  };
  for (const auto& s : setups) {
    TempDir dir;
    const auto code = make_code(s.p, s.c, s.w);
    const std::size_t bs = 32;
    const std::size_t stripe = s.p.data_blocks * bs;
    for (std::size_t size : {std::size_t{0}, std::size_t{1}, stripe - 1, stripe, stripe + 1}) {
      write_random_file(dir / "in.bin", size, rng);
      const auto paths = split_and_encode(dir / "in.bin", code, bs, s.systematic, dir / "s");
      const auto input = read_file(dir / "in.bin");
      for (const auto& erased : testutil::subsets(s.p.n, s.p.n - s.p.k)) {
        std::vector<fs::path> kept;
        for (std::size_t i = 0; i < s.p.n; ++i) {
          if (std::find(erased.begin(), erased.end(), i) == erased.end()) kept.push_back(paths[i]);
        }
        reassemble(kept, dir / "out.bin");
        ASSERT_EQ(read_file(dir / "out.bin"), input) << "size " << size;
      }
    }
  }
}

TEST(Stripes, MixedEncodingsAreRejected) {
  TempDir dir;
  std::mt19937_64 rng(4);
  const auto code = make_code(CodeParams::msr(3), Construction::Sparse, 8);
  write_random_file(dir / "a.bin", 1000, rng);
  write_random_file(dir / "b.bin", 1001, rng);
  const auto a = split_and_encode(dir / "a.bin", code, 64, true, dir / "a");
  const auto b = split_and_encode(dir / "b.bin", code, 64, true, dir / "b");
  const std::vector<fs::path> mixed{a[0], a[1], b[2]};
  EXPECT_THROW(reassemble(mixed, dir / "out.bin"), FormatError);
  const std::vector<fs::path> few{a[0], a[1]};
  EXPECT_THROW(reassemble(few, dir / "out.bin"), Unrecoverable);
  const std::vector<fs::path> twice{a[0], a[0], a[1]};
  EXPECT_THROW(reassemble(twice, dir / "out.bin"), FormatError);
}

TEST(Stripes, TruncatedShardIsRejected) {
  TempDir dir;
  std::mt19937_64 rng(5);
  const auto code = make_code(CodeParams::msr(3), Construction::Sparse, 8);
  write_random_file(dir / "a.bin", 1000, rng);
  const auto a = split_and_encode(dir / "a.bin", code, 64, true, dir / "a");
  fs::resize_file(a[1], fs::file_size(a[1]) - 1);
  const std::vector<fs::path> paths{a[0], a[1], a[2]};
  EXPECT_THROW(reassemble(paths, dir / "out.bin"), FormatError);
}

TEST(Stripes, RepairRegeneratesIdenticalShard) {
  TempDir dir;
  std::mt19937_64 rng(6);
  for (auto c : {Construction::Sparse, Construction::Vanilla}) {
    const auto code = make_code(CodeParams::msr(3), c, 8);
    write_random_file(dir / "in.bin", 5000, rng);
    const auto paths = split_and_encode(dir / "in.bin", code, 64, true, dir / "s");
    for (std::size_t failed = 0; failed < 5; ++failed) {
      std::vector<fs::path> survivors;
      for (std::size_t i = 0; i < 5; ++i) {
        if (i != failed) survivors.push_back(paths[i]);
      }
      const std::size_t reads = repair_shard(survivors, failed, dir / "regen.shard");
      EXPECT_EQ(read_file(dir / "regen.shard"), read_file(paths[failed]));
      const std::size_t stripes = read_shard_header(paths[0]).stripe_count;
      const std::size_t per_helper = (c == Construction::Sparse && failed < 2) ? 1 : 2;
      EXPECT_EQ(reads, stripes * 4 * per_helper);
    }
  }
}

TEST(Stripes, RepairThenReassemble) {
  TempDir dir;
  std::mt19937_64 rng(7);
  const auto code = make_code(CodeParams::msr(3), Construction::Sparse, 8);
  write_random_file(dir / "in.bin", 3333, rng);
  const auto paths = split_and_encode(dir / "in.bin", code, 64, false, dir / "s");
  const std::vector<fs::path> survivors{paths[1], paths[2], paths[3], paths[4]};
  repair_shard(survivors, 0, dir / "node_001.shard");
  const std::vector<fs::path> use{dir / "node_001.shard", paths[3], paths[4]};
  reassemble(use, dir / "out.bin");
  EXPECT_EQ(read_file(dir / "out.bin"), read_file(dir / "in.bin"));
}

TEST(Stripes, RepairNeedsDSurvivors) {
  TempDir dir;
  std::mt19937_64 rng(8);
  const auto code = make_code(CodeParams::msr(3), Construction::Sparse, 8);
  write_random_file(dir / "in.bin", 1000, rng);
  const auto paths = split_and_encode(dir / "in.bin", code, 64, true, dir / "s");
  const std::vector<fs::path> three{paths[1], paths[2], paths[3]};
  EXPECT_THROW(repair_shard(three, 0, dir / "x.shard"), Unrecoverable);
  const std::vector<fs::path> with_target{paths[0], paths[1], paths[2], paths[3]};
  EXPECT_THROW(repair_shard(with_target, 0, dir / "x.shard"), InvalidArgument);
}

TEST(Stripes, DeterministicOutput) {
  TempDir dir;
  std::mt19937_64 rng(9);
  const auto code = make_code(CodeParams::msr(4), Construction::Sparse, 16);
  write_random_file(dir / "in.bin", 7777, rng);
  const auto a = split_and_encode(dir / "in.bin", code, 128, true, dir / "a");
  const auto b = split_and_encode(dir / "in.bin", code, 128, true, dir / "b");
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(read_file(a[i]), read_file(b[i]));
}

TEST(Stripes, RejectsBadArguments) {
  TempDir dir;
  std::mt19937_64 rng(10);
  write_random_file(dir / "in.bin", 100, rng);
  const auto code = make_code(CodeParams::msr(3), Construction::Sparse, 16);
  EXPECT_THROW(split_and_encode(dir / "in.bin", code, 0, true, dir / "s"), InvalidArgument);
  EXPECT_THROW(split_and_encode(dir / "in.bin", code, 33, true, dir / "s"), InvalidArgument);
  auto odd = code;
  odd.matrices.psi(4, 0) ^= 1;
  EXPECT_THROW(split_and_encode(dir / "in.bin", odd, 64, true, dir / "s"), InvalidArgument);
}
