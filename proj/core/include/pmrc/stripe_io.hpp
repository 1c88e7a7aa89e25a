#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pmrc/code_file.hpp"

namespace pmrc {

constexpr std::size_t kDefaultBlockSize = 16384;

// Fixed 33-byte little-endian header at the start of every shard file:
//
//   off size field
//     0    4 magic "PMRC"
//     4    1 version (1)
//     5    1 w
//     6    1 variant (0 = MSR, 1 = MBR)
//     7    1 construction (0 = vanilla, 1 = sparse)
//     8    2 n
//    10    2 k
//    12    2 d
//    14    2 node_index (1-based)
//    16    4 block_size
//    20    8 original_length
//    28    4 stripe_count
//    32    1 systematic
//
// The payload follows: alpha blocks per stripe, stripes in order.
struct ShardHeader {
  static constexpr std::array<std::uint8_t, 4> kMagic{'P', 'M', 'R', 'C'};
  static constexpr std::uint8_t kVersion = 1;
  static constexpr std::size_t kSize = 33;

  std::uint8_t version = kVersion;
  std::uint8_t width = 8;
  Variant variant = Variant::Msr;
  Construction construction = Construction::Vanilla;
  std::uint16_t n = 0;
  std::uint16_t k = 0;
  std::uint16_t d = 0;
  std::uint16_t node_index = 0;
  std::uint32_t block_size = 0;
  std::uint64_t original_length = 0;
  std::uint32_t stripe_count = 0;
  bool systematic = false;

  std::array<std::uint8_t, kSize> serialize() const;
  // Throws FormatError on bad magic/version or parameters that do not form
  // a valid code.
  static ShardHeader parse(std::span<const std::uint8_t> bytes);

  CodeParams params() const;
  // Every field except node_index.
  bool same_encoding(const ShardHeader& other) const noexcept;

  friend bool operator==(const ShardHeader&, const ShardHeader&) = default;
};

ShardHeader read_shard_header(const std::filesystem::path& path);

// "node_007.shard" for 0-based node 6.
std::string shard_file_name(std::size_t node);

// Zero-pads the input to whole stripes of B * block_size bytes, encodes each
// stripe and writes one shard file per node into out_dir. The code must be
// canonical (its header fields fully describe it). Returns the n paths.
std::vector<std::filesystem::path> split_and_encode(const std::filesystem::path& input,
                                                    const CodeDefinition& code,
                                                    std::size_t block_size, bool systematic,
                                                    const std::filesystem::path& out_dir);

// Decodes every stripe with the lazy linear decoder and writes the original
// bytes. Throws FormatError for inconsistent headers, Unrecoverable for too
// few shards.
void reassemble(std::span<const std::filesystem::path> shards,
                const std::filesystem::path& output);

// Regenerates the shard of 0-based node `failed` from d surviving shards
// (the d lowest-indexed are used). Helpers read only the blocks with a
// nonzero repair coefficient. Returns the number of payload blocks read.
std::size_t repair_shard(std::span<const std::filesystem::path> surviving, std::size_t failed,
                         const std::filesystem::path& output);

}  // namespace pmrc
