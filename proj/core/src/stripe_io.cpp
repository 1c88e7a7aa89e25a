#include "pmrc/stripe_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>

#include "pmrc/codec.hpp"
#include "pmrc/error.hpp"

namespace pmrc {
namespace fs = std::filesystem;

namespace {

template <typename T>
void put_le(std::uint8_t* out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out[i] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i));
  }
}

template <typename T>
T get_le(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return static_cast<T>(v);
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_bytes(std::ofstream& out, std::span<const std::uint8_t> bytes, const fs::path& path) {
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void read_exact(std::ifstream& in, std::span<std::uint8_t> bytes, const fs::path& path) {
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw FormatError("shard '" + path.string() + "' is truncated");
  }
}

struct OpenShard {
  fs::path path;
  ShardHeader header;
  std::ifstream stream;
};

// Opens all shards, checks that they belong to the same encoding and keys
// them by 0-based node.
std::map<std::size_t, OpenShard> open_shards(std::span<const fs::path> paths) {
  if (paths.empty()) throw InvalidArgument("no shard files given");
  std::map<std::size_t, OpenShard> shards;
  for (const fs::path& path : paths) {
    OpenShard shard{path, read_shard_header(path), open_in(path)};
    if (!shards.empty() && !shards.begin()->second.header.same_encoding(shard.header)) {
      throw FormatError("shard '" + path.string() + "' belongs to a different encoding than '" +
                        shards.begin()->second.path.string() + "'");
    }
    const std::size_t node = shard.header.node_index - 1u;
    if (shards.count(node)) {
      throw FormatError("two shards for node " + std::to_string(node + 1));
    }
    const std::uint64_t expected =
        ShardHeader::kSize + std::uint64_t{shard.header.stripe_count} *
                                 shard.header.params().alpha * shard.header.block_size;
    if (fs::file_size(path) != expected) {
      throw FormatError("shard '" + path.string() + "' has the wrong size");
    }
    shards.emplace(node, std::move(shard));
  }
  return shards;
}

GeneratorMatrix generator_for(const CodeDefinition& code, bool systematic) {
  GeneratorMatrix gm = generator_from_pm(code.matrices, code.index);
  if (systematic && code.params().variant == Variant::Msr) return systematize(gm);
  return gm;
}

}  // namespace

std::array<std::uint8_t, ShardHeader::kSize> ShardHeader::serialize() const {
  std::array<std::uint8_t, kSize> out{};
  std::copy(kMagic.begin(), kMagic.end(), out.begin());
  out[4] = version;
  out[5] = width;
  out[6] = static_cast<std::uint8_t>(variant);
  out[7] = static_cast<std::uint8_t>(construction);
  put_le<std::uint16_t>(&out[8], n);
  put_le<std::uint16_t>(&out[10], k);
  put_le<std::uint16_t>(&out[12], d);
  put_le<std::uint16_t>(&out[14], node_index);
  put_le<std::uint32_t>(&out[16], block_size);
  put_le<std::uint64_t>(&out[20], original_length);
  put_le<std::uint32_t>(&out[28], stripe_count);
  out[32] = systematic ? 1 : 0;
  return out;
}

ShardHeader ShardHeader::parse(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSize) throw FormatError("shard header truncated");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw FormatError("bad shard magic");
  }
  ShardHeader h;
  h.version = bytes[4];
  if (h.version != kVersion) {
    throw FormatError("unsupported shard version " + std::to_string(h.version));
  }
  h.width = bytes[5];
  if (bytes[6] > 1 || bytes[7] > 1 || bytes[32] > 1) throw FormatError("bad shard enum field");
  h.variant = static_cast<Variant>(bytes[6]);
  h.construction = static_cast<Construction>(bytes[7]);
  h.n = get_le<std::uint16_t>(&bytes[8]);
  h.k = get_le<std::uint16_t>(&bytes[10]);
  h.d = get_le<std::uint16_t>(&bytes[12]);
  h.node_index = get_le<std::uint16_t>(&bytes[14]);
  h.block_size = get_le<std::uint32_t>(&bytes[16]);
  h.original_length = get_le<std::uint64_t>(&bytes[20]);
  h.stripe_count = get_le<std::uint32_t>(&bytes[28]);
  h.systematic = bytes[32] == 1;

  if (h.width != 8 && h.width != 16) throw FormatError("bad field width in shard header");
  try {
    (void)h.params();
  } catch (const Error& e) {
    throw FormatError(std::string("invalid code parameters in shard header: ") + e.what());
  }
  if (h.node_index == 0 || h.node_index > h.n) throw FormatError("bad node index in shard header");
  if (h.block_size == 0 || h.block_size % (h.width / 8) != 0) {
    throw FormatError("block size is not symbol aligned");
  }
  return h;
}

CodeParams ShardHeader::params() const { return CodeParams::make(n, k, d, variant); }

bool ShardHeader::same_encoding(const ShardHeader& o) const noexcept {
  return version == o.version && width == o.width && variant == o.variant &&
         construction == o.construction && n == o.n && k == o.k && d == o.d &&
         block_size == o.block_size && original_length == o.original_length &&
         stripe_count == o.stripe_count && systematic == o.systematic;
}

ShardHeader read_shard_header(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::array<std::uint8_t, ShardHeader::kSize> bytes{};
  read_exact(in, bytes, path);
  return ShardHeader::parse(bytes);
}

std::string shard_file_name(std::size_t node) {
  char name[32];
  std::snprintf(name, sizeof name, "node_%03zu.shard", node + 1);
  return name;
}

std::vector<fs::path> split_and_encode(const fs::path& input, const CodeDefinition& code,
                                       std::size_t block_size, bool systematic,
                                       const fs::path& out_dir) {
  const CodeParams& p = code.params();
  if (!is_canonical(code)) {
    throw InvalidArgument("shard files can only describe canonical code definitions");
  }
  if (block_size == 0 || block_size % code.field().symbol_bytes() != 0 ||
      block_size > 0xFFFFFFFFu) {
    throw InvalidArgument("block size must be a positive multiple of the symbol size");
  }
  const std::uint64_t length = fs::file_size(input);
  const std::uint64_t stripe_bytes = std::uint64_t{p.data_blocks} * block_size;
  const std::uint64_t stripes = (length + stripe_bytes - 1) / stripe_bytes;
  if (stripes > 0xFFFFFFFFu) throw InvalidArgument("input too large for this block size");

  fs::create_directories(out_dir);
  ShardHeader header;
  header.width = static_cast<std::uint8_t>(code.field().width());
  header.variant = p.variant;
  header.construction = code.matrices.construction;
  header.n = static_cast<std::uint16_t>(p.n);
  header.k = static_cast<std::uint16_t>(p.k);
  header.d = static_cast<std::uint16_t>(p.d);
  header.block_size = static_cast<std::uint32_t>(block_size);
  header.original_length = length;
  header.stripe_count = static_cast<std::uint32_t>(stripes);
  header.systematic = systematic;

  std::vector<fs::path> paths;
  std::vector<std::ofstream> outs;
  for (std::size_t i = 0; i < p.n; ++i) {
    paths.push_back(out_dir / shard_file_name(i));
    outs.push_back(open_out(paths.back()));
    header.node_index = static_cast<std::uint16_t>(i + 1);
    write_bytes(outs.back(), header.serialize(), paths.back());
  }

  const LinearEncoder encoder(generator_for(code, systematic));
  std::ifstream in = open_in(input);
  BlockVector x(p.data_blocks, block_size);
  std::vector<Share> shares;
  for (std::size_t i = 0; i < p.n; ++i) {
    shares.push_back({i, BlockVector(p.alpha, block_size, BlockRole::Encoded)});
  }
  for (std::uint64_t s = 0; s < stripes; ++s) {
    auto bytes = x.bytes();
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    std::fill(bytes.begin() + static_cast<std::ptrdiff_t>(got), bytes.end(), 0);
    encoder.encode_into(x, shares);
    for (std::size_t i = 0; i < p.n; ++i) write_bytes(outs[i], shares[i].blocks.bytes(), paths[i]);
  }
  for (std::size_t i = 0; i < p.n; ++i) {
    outs[i].close();
    if (!outs[i]) throw Error("failed closing '" + paths[i].string() + "'");
  }
  return paths;
}

void reassemble(std::span<const fs::path> shard_paths, const fs::path& output) {
  auto shards = open_shards(shard_paths);
  const ShardHeader& h = shards.begin()->second.header;
  const CodeParams p = h.params();
  const CodeDefinition code = make_code(p, h.construction, h.width);
  const GeneratorMatrix gm = generator_for(code, h.systematic);

  std::vector<std::size_t> available;
  for (const auto& [node, shard] : shards) available.push_back(node);
  const LinearDecoder decoder(gm, available);

  // Only the nodes whose rows were selected are read.
  std::vector<std::size_t> used;
  for (std::size_t row : decoder.selected_rows()) used.push_back(row / p.alpha);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  std::vector<Share> stripe;
  for (std::size_t node : used) {
    stripe.push_back({node, BlockVector(p.alpha, h.block_size, BlockRole::Encoded)});
    shards.at(node).stream.seekg(static_cast<std::streamoff>(ShardHeader::kSize));
  }

  std::ofstream out = open_out(output);
  std::uint64_t remaining = h.original_length;
  for (std::uint32_t s = 0; s < h.stripe_count; ++s) {
    for (Share& share : stripe) {
      OpenShard& src = shards.at(share.node);
      read_exact(src.stream, share.blocks.bytes(), src.path);
    }
    const BlockVector x = decoder.decode(stripe);
    const auto bytes = x.bytes();
    const auto take = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, bytes.size()));
    write_bytes(out, bytes.first(take), output);
    remaining -= take;
  }
  out.close();
  if (!out) throw Error("failed closing '" + output.string() + "'");
}

std::size_t repair_shard(std::span<const fs::path> surviving, std::size_t failed,
                         const fs::path& output) {
  auto shards = open_shards(surviving);
  ShardHeader header = shards.begin()->second.header;
  const CodeParams p = header.params();
  if (failed >= p.n) throw InvalidArgument("failed node out of range");
  if (shards.count(failed)) throw InvalidArgument("the shard to repair is among the survivors");
  if (shards.size() < p.d) {
    throw Unrecoverable("repair needs " + std::to_string(p.d) + " surviving shards, have " +
                        std::to_string(shards.size()));
  }
  const CodeDefinition code = make_code(p, header.construction, header.width);

  std::vector<std::size_t> helpers;
  for (const auto& [node, shard] : shards) {
    if (helpers.size() < p.d) helpers.push_back(node);
  }
  const RepairPlan plan = make_repair_plan(code.matrices, failed, helpers);
  const RepairCollector collector(code.matrices, plan);
  const Field& field = code.field();
  const std::size_t bs = header.block_size;

  std::vector<std::size_t> needed;
  for (std::size_t j = 0; j < plan.mu.size(); ++j) {
    if (plan.mu[j] != 0) needed.push_back(j);
  }

  header.node_index = static_cast<std::uint16_t>(failed + 1);
  std::ofstream out = open_out(output);
  write_bytes(out, header.serialize(), output);

  std::vector<std::vector<std::uint8_t>> symbols(p.d, std::vector<std::uint8_t>(bs));
  std::vector<std::uint8_t> block(bs);
  std::size_t reads = 0;
  for (std::uint32_t s = 0; s < header.stripe_count; ++s) {
    for (std::size_t h = 0; h < p.d; ++h) {
      OpenShard& src = shards.at(plan.helpers[h]);
      std::fill(symbols[h].begin(), symbols[h].end(), 0);
      for (std::size_t j : needed) {
        const std::uint64_t offset =
            ShardHeader::kSize + (std::uint64_t{s} * p.alpha + j) * bs;
        src.stream.seekg(static_cast<std::streamoff>(offset));
        read_exact(src.stream, block, src.path);
        field.region_madd(symbols[h], block, plan.mu[j]);
        ++reads;
      }
    }
    std::vector<std::span<const std::uint8_t>> views(symbols.begin(), symbols.end());
    const Share share = collector.collect(views);
    write_bytes(out, share.blocks.bytes(), output);
  }
  out.close();
  if (!out) throw Error("failed closing '" + output.string() + "'");
  return reads;
}

}  // namespace pmrc
