#include "pmrc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "pmrc/codec.hpp"
#include "pmrc/error.hpp"
#include "pmrc/stats.hpp"

namespace pmrc {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

BlockVector random_blocks(std::size_t count, std::size_t block_size, std::mt19937_64& rng) {
  BlockVector v(count, block_size);
  auto bytes = v.bytes();
  std::size_t i = 0;
  for (; i + 8 <= bytes.size(); i += 8) {
    const std::uint64_t word = rng();
    std::memcpy(bytes.data() + i, &word, 8);
  }
  for (; i < bytes.size(); ++i) bytes[i] = static_cast<std::uint8_t>(rng());
  return v;
}

// Systematic n x k Reed-Solomon generator derived from the Vandermonde
// matrix on the points g^0 .. g^(n-1). Each node holds one block.
GeneratorMatrix rs_generator(const CodeParams& pm, unsigned width) {
  const Field f = Field::make(width);
  if (pm.n > f.order()) throw InvalidArgument("field too small for this RS baseline");
  Matrix v(f, pm.n, pm.k);
  for (std::size_t i = 0; i < pm.n; ++i) {
    for (std::size_t j = 0; j < pm.k; ++j) v(i, j) = f.exp(static_cast<std::uint64_t>(i) * j);
  }
  CodeParams rs;
  rs.n = pm.n;
  rs.k = pm.k;
  rs.d = pm.k;
  rs.variant = pm.variant;
  rs.alpha = 1;
  rs.data_blocks = pm.k;
  return systematize(GeneratorMatrix{v, false, rs});
}

bool precoded(const BenchCode& c) {
  return c.systematic && c.params.variant == Variant::Msr;
}

GeneratorMatrix pm_generator(const CodeDefinition& code, bool systematic) {
  GeneratorMatrix gm = generator_from_pm(code.matrices, code.index);
  return systematic && code.params().variant == Variant::Msr ? systematize(gm) : gm;
}

std::vector<Share> alloc_shares(std::size_t first, std::size_t count, std::size_t blocks,
                                std::size_t block_size) {
  std::vector<Share> shares;
  for (std::size_t i = first; i < first + count; ++i) {
    shares.push_back({i, BlockVector(blocks, block_size, BlockRole::Encoded)});
  }
  return shares;
}

// x laid out as the shares of nodes 0..k-1.
std::vector<Share> data_as_shares(const BlockVector& x, std::size_t k, std::size_t alpha) {
  std::vector<Share> shares = alloc_shares(0, k, alpha, x.block_size());
  for (std::size_t i = 0; i < k; ++i) {
    std::memcpy(shares[i].blocks.bytes().data(), x.block(i * alpha).data(),
                alpha * x.block_size());
  }
  return shares;
}

// Accumulates timings and apply-phase inversion counts.
struct Timer {
  double init_total = 0.0;
  std::size_t init_count = 0;
  double apply_total = 0.0;
  std::uint64_t inversions = 0;

  template <typename F>
  auto init(F&& f) {
    const auto t0 = Clock::now();
    auto out = f();
    init_total += elapsed(t0);
    ++init_count;
    return out;
  }

  template <typename F>
  void apply(F&& f) {
    const auto before = stats::snapshot().matrix_inversions;
    const auto t0 = Clock::now();
    f();
    apply_total += elapsed(t0);
    inversions += stats::snapshot().matrix_inversions - before;
  }
};

void bench_encode(const BenchCode& c, std::size_t bs, std::size_t runs, std::mt19937_64& rng,
                  Timer& timer) {
  const CodeParams& p = c.params;
  if (c.method == BenchMethod::ReedSolomon) {
    const BlockVector x = random_blocks(p.k, p.alpha * bs, rng);
    const LinearEncoder enc = timer.init([&] { return LinearEncoder(rs_generator(p, c.width)); });
    std::vector<Share> out = alloc_shares(0, p.n, 1, p.alpha * bs);
    for (std::size_t r = 0; r < runs; ++r) timer.apply([&] { enc.encode_parity_into(x, out); });
    return;
  }

  const BlockVector x = random_blocks(p.data_blocks, bs, rng);
  if (c.method == BenchMethod::Linear) {
    const LinearEncoder enc = timer.init([&] {
      return LinearEncoder(pm_generator(make_code(p, c.construction, c.width), c.systematic));
    });
    std::vector<Share> out = alloc_shares(0, p.n, p.alpha, bs);
    for (std::size_t r = 0; r < runs; ++r) {
      timer.apply([&] {
        if (enc.systematic()) {
          enc.encode_parity_into(x, out);
        } else {
          enc.encode_into(x, out);
        }
      });
    }
    return;
  }

  const CodeDefinition code = timer.init([&] { return make_code(p, c.construction, c.width); });
  if (!precoded(c)) {
    std::vector<Share> out = alloc_shares(0, p.n, p.alpha, bs);
    for (std::size_t r = 0; r < runs; ++r) {
      timer.apply([&] { encode_specific_into(code, x, out); });
    }
    return;
  }
  // Systematic MSR: precode by decoding x as the shares of nodes 0..k-1,
  // then encode the parity nodes.
  std::vector<std::size_t> first_k(p.k);
  for (std::size_t i = 0; i < p.k; ++i) first_k[i] = i;
  const MsrDecoder precoder = timer.init([&] { return MsrDecoder(code, first_k); });
  const std::vector<Share> data = data_as_shares(x, p.k, p.alpha);
  std::vector<Share> parity = alloc_shares(p.k, p.n - p.k, p.alpha, bs);
  for (std::size_t r = 0; r < runs; ++r) {
    timer.apply([&] {
      const BlockVector z = precoder.decode(data);
      encode_specific_into(code, z, parity);
    });
  }
}

std::vector<std::size_t> sample_erasures(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = i;
  std::shuffle(nodes.begin(), nodes.end(), rng);
  nodes.resize(count);
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

void bench_decode(const BenchCode& c, std::size_t bs, std::size_t runs,
                  const BenchOptions& opt, std::mt19937_64& rng, Timer& timer,
                  std::map<std::size_t, std::size_t>& patterns) {
  const CodeParams& p = c.params;
  const bool rs = c.method == BenchMethod::ReedSolomon;
  std::optional<CodeDefinition> code;
  std::optional<GeneratorMatrix> gm;
  std::vector<Share> stored;
  if (rs) {
    gm = rs_generator(p, c.width);
    stored = LinearEncoder(*gm).encode(random_blocks(p.k, p.alpha * bs, rng));
  } else {
    code = make_code(p, c.construction, c.width);
    gm = pm_generator(*code, c.systematic);
    stored = LinearEncoder(*gm).encode(random_blocks(p.data_blocks, bs, rng));
  }

  const std::size_t max_failures = p.n - p.k;
  if (opt.failures && *opt.failures > max_failures) {
    throw InvalidArgument("cannot decode with more than n-k failures");
  }
  std::uniform_int_distribution<std::size_t> count_dist(1, max_failures);
  for (std::size_t r = 0; r < runs; ++r) {
    const std::size_t count = opt.failures ? *opt.failures : count_dist(rng);
    ++patterns[count];
    const auto erased = sample_erasures(p.n, count, rng);
    std::vector<std::size_t> available;
    std::vector<Share> shares;
    for (const Share& s : stored) {
      if (!std::binary_search(erased.begin(), erased.end(), s.node)) {
        available.push_back(s.node);
        shares.push_back(s);
      }
    }
    if (c.method == BenchMethod::Specific) {
      const SpecificDecoder dec =
          timer.init([&] { return SpecificDecoder(*code, available, c.systematic); });
      timer.apply([&] { (void)dec.decode(shares); });
    } else {
      const LinearDecoder dec = timer.init([&] { return LinearDecoder(*gm, available); });
      timer.apply([&] { (void)dec.decode(shares); });
    }
  }
}

void bench_repair(const BenchCode& c, std::size_t bs, std::size_t runs, std::mt19937_64& rng,
                  Timer& timer, std::map<std::size_t, std::size_t>& patterns) {
  const CodeParams& p = c.params;
  std::uniform_int_distribution<std::size_t> node_dist(0, p.n - 1);

  if (c.method == BenchMethod::ReedSolomon) {
    const GeneratorMatrix gm = rs_generator(p, c.width);
    const std::vector<Share> stored =
        LinearEncoder(gm).encode(random_blocks(p.k, p.alpha * bs, rng));
    for (std::size_t r = 0; r < runs; ++r) {
      const std::size_t failed = node_dist(rng);
      ++patterns[failed];
      std::vector<std::size_t> helpers;
      std::vector<Share> shares;
      for (std::size_t i = 0; i < p.n && helpers.size() < p.k; ++i) {
        if (i == failed) continue;
        helpers.push_back(i);
        shares.push_back(stored[i]);
      }
      const std::size_t row[] = {failed};
      struct State {
        LinearDecoder dec;
        LinearMap reencode;
      };
      const State st = timer.init([&] {
        return State{LinearDecoder(gm, helpers), LinearMap(select_rows(gm.g, row))};
      });
      BlockVector lost(1, p.alpha * bs, BlockRole::Encoded);
      timer.apply([&] {
        const BlockVector x = st.dec.decode(shares);
        const auto in = const_views(x);
        const auto out = views(lost);
        st.reencode.apply(in, out);
      });
    }
    return;
  }

  const CodeDefinition code = make_code(p, c.construction, c.width);
  const std::vector<Share> stored =
      LinearEncoder(pm_generator(code, c.systematic))
          .encode(random_blocks(p.data_blocks, bs, rng));
  for (std::size_t r = 0; r < runs; ++r) {
    const std::size_t failed = node_dist(rng);
    ++patterns[failed];
    struct State {
      RepairPlan plan;
      RepairCollector collector;
    };
    const State st = timer.init([&] {
      RepairPlan plan = make_repair_plan(code.matrices, failed);
      RepairCollector collector(code.matrices, plan);
      return State{std::move(plan), std::move(collector)};
    });
    // Helper computations followed by the newcomer, one after another.
    timer.apply([&] {
      std::vector<RepairSymbol> symbols;
      symbols.reserve(p.d);
      for (std::size_t h : st.plan.helpers) {
        symbols.push_back(repair_helper(code.field(), stored[h], st.plan));
      }
      (void)st.collector.collect(symbols);
    });
  }
}

}  // namespace

std::string_view to_string(BenchOp op) noexcept {
  switch (op) {
    case BenchOp::Encode: return "encode";
    case BenchOp::Decode: return "decode";
    case BenchOp::Repair: return "repair";
  }
  return "?";
}

std::string_view to_string(BenchMethod m) noexcept {
  switch (m) {
    case BenchMethod::Specific: return "specific";
    case BenchMethod::Linear: return "linear";
    case BenchMethod::ReedSolomon: return "rs";
  }
  return "?";
}

BenchOp parse_bench_op(std::string_view s) {
  if (s == "encode") return BenchOp::Encode;
  if (s == "decode") return BenchOp::Decode;
  if (s == "repair") return BenchOp::Repair;
  throw InvalidArgument("unknown operation '" + std::string(s) + "'");
}

BenchMethod parse_bench_method(std::string_view s) {
  if (s == "specific") return BenchMethod::Specific;
  if (s == "linear") return BenchMethod::Linear;
  if (s == "rs") return BenchMethod::ReedSolomon;
  throw InvalidArgument("unknown method '" + std::string(s) + "'");
}

std::string BenchCode::describe() const {
  std::ostringstream os;
  os << to_string(params.variant) << '/' << to_string(construction) << '/' << to_string(method)
     << '/' << (systematic ? "sys" : "nonsys") << " n=" << params.n << " k=" << params.k
     << " d=" << params.d << " w=" << width;
  return os.str();
}

std::string BenchResult::pattern_summary() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, count] : pattern_counts) {
    if (!first) os << ';';
    os << key << ':' << count;
    first = false;
  }
  return os.str();
}

BenchResult run_bench(BenchOp op, const BenchCode& code, std::size_t block_size,
                      std::size_t runs, const BenchOptions& options) {
  if (runs == 0) throw InvalidArgument("runs must be at least 1");
  if (code.width != 8 && code.width != 16) throw InvalidArgument("field width must be 8 or 16");
  if (block_size == 0 || block_size % (code.width / 8) != 0) {
    throw InvalidArgument("block size " + std::to_string(block_size) +
                          " is not a positive multiple of the symbol size");
  }
  if (code.method == BenchMethod::ReedSolomon && !code.systematic) {
    throw InvalidArgument("the RS baseline is systematic only");
  }

  BenchResult result;
  result.op = op;
  result.code = code;
  result.block_size = block_size;
  result.runs = runs;

  std::mt19937_64 rng(options.seed);
  Timer timer;
  switch (op) {
    case BenchOp::Encode:
      bench_encode(code, block_size, runs, rng, timer);
      break;
    case BenchOp::Decode:
      bench_decode(code, block_size, runs, options, rng, timer, result.pattern_counts);
      break;
    case BenchOp::Repair:
      bench_repair(code, block_size, runs, rng, timer, result.pattern_counts);
      break;
  }

  result.init_time = timer.init_count ? timer.init_total / static_cast<double>(timer.init_count)
                                      : 0.0;
  result.apply_time = timer.apply_total / static_cast<double>(runs);
  result.apply_inversions = timer.inversions;
  const std::size_t blocks =
      op == BenchOp::Repair ? code.params.alpha : code.params.data_blocks;
  const double bytes = static_cast<double>(blocks) * static_cast<double>(block_size);
  result.throughput = result.apply_time > 0.0 ? bytes / result.apply_time / 1e6 : 0.0;
  return result;
}

std::vector<BenchResult> sweep_block_size(BenchOp op, const BenchCode& code,
                                          std::span<const std::size_t> sizes, std::size_t runs,
                                          const BenchOptions& options) {
  if (sizes.empty()) throw InvalidArgument("no block sizes given");
  for (std::size_t bs : sizes) {
    if (bs == 0 || bs % (code.width / 8) != 0) {
      throw InvalidArgument("block size " + std::to_string(bs) + " is not symbol aligned");
    }
  }
  std::vector<BenchResult> out;
  for (std::size_t bs : sizes) out.push_back(run_bench(op, code, bs, runs, options));
  return out;
}

void write_csv_header(std::ostream& out) {
  out << "operation,variant,construction,method,systematic,w,n,k,d,alpha,block_size,runs,"
         "init_time_s,apply_time_s,throughput_mbps,apply_inversions,patterns\n";
}

void write_csv_row(std::ostream& out, const BenchResult& r) {
  const BenchCode& c = r.code;
  std::ostringstream os;
  os << to_string(r.op) << ',' << to_string(c.params.variant) << ','
     << to_string(c.construction) << ',' << to_string(c.method) << ','
     << (c.systematic ? 1 : 0) << ',' << c.width << ',' << c.params.n << ',' << c.params.k << ','
     << c.params.d << ',' << c.params.alpha << ',' << r.block_size << ',' << r.runs << ','
     << std::setprecision(6) << std::scientific << r.init_time << ',' << r.apply_time << ','
     << std::fixed << std::setprecision(2) << r.throughput << ',' << r.apply_inversions << ','
     << r.pattern_summary() << '\n';
  out << os.str();
}

void write_csv(std::ostream& out, std::span<const BenchResult> results) {
  write_csv_header(out);
  for (const BenchResult& r : results) write_csv_row(out, r);
}

std::vector<SparsityRow> sparsity_report(std::span<const std::size_t> ks, unsigned width) {
  std::vector<SparsityRow> rows;
  for (std::size_t k : ks) {
    const CodeParams p = CodeParams::msr(k);
    SparsityRow row;
    row.k = k;
    const Construction order[] = {Construction::Vanilla, Construction::Sparse};
    for (int c = 0; c < 2; ++c) {
      const CodeDefinition code = make_code(p, order[c], width);
      const GeneratorMatrix g = generator_from_pm(code.matrices, code.index);
      const Sparsity plain = sparsity(g);
      const Sparsity sys = sparsity(systematize(g));
      row.exact[c] = plain.percent();
      row.exact[2 + c] = sys.percent();
      (c == 0 ? row.vanilla : row.sparse) = plain.reported();
      (c == 0 ? row.vanilla_systematic : row.sparse_systematic) = sys.reported();
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sparsity_table(std::ostream& out, std::span<const SparsityRow> rows) {
  out << std::left << std::setw(22) << "construction";
  for (const SparsityRow& r : rows) out << std::right << std::setw(8) << ("k=" + std::to_string(r.k));
  out << '\n';
  const char* names[] = {"vanilla", "sparse", "vanilla systematic", "sparse systematic"};
  for (int line = 0; line < 4; ++line) {
    out << std::left << std::setw(22) << names[line];
    for (const SparsityRow& r : rows) {
      const int v[] = {r.vanilla, r.sparse, r.vanilla_systematic, r.sparse_systematic};
      out << std::right << std::setw(8) << v[line];
    }
    out << '\n';
  }
}

}  // namespace pmrc
