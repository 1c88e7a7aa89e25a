// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pmrc/bench.hpp"
#include "pmrc/codec.hpp"
#include "pmrc/error.hpp"
#include "pmrc/stripe_io.hpp"

using namespace pmrc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void fail(const std::string& why) {
    if (pass) note << "first failure: " << why << "; ";
    pass = false;
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

BlockVector random_blocks(std::size_t count, std::size_t bs, std::mt19937_64& rng) {
  BlockVector v(count, bs);
  for (auto& b : v.bytes()) b = static_cast<std::uint8_t>(rng());
  return v;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == r) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

std::vector<std::size_t> without(std::size_t n, const std::vector<std::size_t>& gone) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(gone.begin(), gone.end(), i) == gone.end()) out.push_back(i);
  }
  return out;
}

std::vector<Share> pick(const std::vector<Share>& all, const std::vector<std::size_t>& nodes) {
  std::vector<Share> out;
  for (std::size_t i : nodes) out.push_back(all[i]);
  return out;
}

std::string describe(const CodeDefinition& c) {
  const CodeParams& p = c.params();
  std::ostringstream os;
  os << to_string(p.variant) << '/' << to_string(c.matrices.construction) << " n=" << p.n
     << " k=" << p.k << " d=" << p.d << " w=" << c.field().width();
  return os.str();
}

// MSR (both constructions) and MBR codes for a given k.
std::vector<CodeDefinition> family(std::size_t k, unsigned w) {
  return {make_code(CodeParams::msr(k), Construction::Vanilla, w),
          make_code(CodeParams::msr(k), Construction::Sparse, w),
          make_code(CodeParams::make(k + 3, k, k + 1, Variant::Mbr), Construction::Vanilla, w)};
}

// ---------------------------------------------------------------------------

void table_sparsity(Outcome& o) {
  const auto t0 = Clock::now();
  const std::size_t ks[] = {4, 8, 16};
  const auto rows = sparsity_report(ks, 8);
  // vanilla, vanilla systematic, sparse, sparse systematic
  const int expected[3][4] = {{50, 0, 64, 50}, {75, 0, 85, 75}, {87, 0, 93, 88}};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& r = rows[i];
    const int got[4] = {r.vanilla, r.vanilla_systematic, r.sparse, r.sparse_systematic};
    o.note << "k=" << r.k << " {" << got[0] << ',' << got[1] << ',' << got[2] << ',' << got[3]
           << "} ";
    for (int j = 0; j < 3; ++j) {
      o.require(got[j] == expected[i][j], "k=" + std::to_string(r.k) + " entry " +
                                              std::to_string(j) + " differs");
    }
    o.require(std::abs(got[3] - expected[i][3]) <= 1,
              "k=" + std::to_string(r.k) + " sparse systematic off by more than 1");
  }
  o.note << "(" << seconds_since(t0) << " s)";
}

void validation_sweep(Outcome& o) {
  const double paper_seconds[] = {0.6, 19.0};
  const unsigned widths[] = {8, 16};
  for (int i = 0; i < 2; ++i) {
    const unsigned w = widths[i];
    const Field f = Field::make(w);
    const auto t0 = Clock::now();
    for (std::size_t k = 2; k <= sparse_max_k(w); ++k) {
      const auto report = validate_construction(build_sparse(CodeParams::msr(k), f));
      o.require(report.overall, "w=" + std::to_string(w) + " k=" + std::to_string(k) + " invalid");
    }
    const double t = seconds_since(t0);
    o.note << "w=" << w << " k=2.." << sparse_max_k(w) << " in " << t << " s ";
    o.require(t <= 10 * paper_seconds[i], "w=" + std::to_string(w) + " sweep too slow");
  }
  // The boundary: k = 40 in GF(2^8) must not validate.
  const bool k40 =
      validate_construction(build_sparse(CodeParams::msr(40), Field::make(8), false)).overall;
  o.note << "(w=8 k=40 " << (k40 ? "valid" : "invalid") << ")";
  o.require(!k40, "sparse k=40 unexpectedly valid in GF(2^8)");
}

// Specific and linear paths on one code and one data vector, for every
// listed availability pattern.
void compare_paths(Outcome& o, const CodeDefinition& code, const BlockVector& x,
                   const std::vector<std::vector<std::size_t>>& alive_sets) {
  const CodeParams& p = code.params();
  const auto gm = generator_from_pm(code.matrices, code.index);
  const auto plain = encode_specific(code, x);
  o.require(plain == encode_linear(gm, x), describe(code) + ": encodings differ");
  const bool msr = p.variant == Variant::Msr;
  const auto sys_gm = msr ? systematize(gm) : gm;
  const auto sys = encode_systematic_specific(code, x);
  o.require(sys == encode_linear(sys_gm, x), describe(code) + ": systematic encodings differ");
  for (const auto& alive : alive_sets) {
    const auto a = pick(plain, alive);
    const auto b = pick(sys, alive);
    const auto lin = decode_linear(gm, a);
    const auto lin_sys = decode_linear(sys_gm, b);
    o.require(lin == x && lin_sys == x, describe(code) + ": linear decode wrong");
    o.require(decode_specific(code, a, false) == lin, describe(code) + ": specific decode differs");
    o.require(decode_specific(code, b, true) == lin_sys,
              describe(code) + ": systematic specific decode differs");
    if (alive.size() == p.k) {
      const auto direct = msr ? decode_msr_specific(code, a) : decode_mbr_specific(code, a);
      o.require(direct == lin, describe(code) + ": k-subset decode differs");
    }
  }
}

void oracle_equivalence(Outcome& o) {
  std::mt19937_64 rng(3);
  std::size_t patterns = 0, codes = 0;
  for (unsigned w : {8u, 16u}) {
    for (std::size_t k : {2u, 3u, 4u}) {
      for (const auto& code : family(k, w)) {
        const CodeParams& p = code.params();
        std::vector<std::vector<std::size_t>> alive_sets;
        for (std::size_t e = 0; e <= p.n - p.k; ++e) {
          for (const auto& gone : subsets(p.n, e)) alive_sets.push_back(without(p.n, gone));
        }
        compare_paths(o, code, random_blocks(p.data_blocks, 32, rng), alive_sets);
        patterns += alive_sets.size();
        ++codes;
      }
    }
  }
  std::size_t trials = 0;
  for (const auto& code : family(8, 8)) {
    const CodeParams& p = code.params();
    for (int t = 0; t < 100; ++t) {
      std::vector<std::size_t> nodes(p.n);
      std::iota(nodes.begin(), nodes.end(), 0);
      std::shuffle(nodes.begin(), nodes.end(), rng);
      const std::size_t keep = p.k + rng() % (p.n - p.k);
      std::vector<std::size_t> alive(nodes.begin(), nodes.begin() + static_cast<long>(keep));
      std::sort(alive.begin(), alive.end());
      compare_paths(o, code, random_blocks(p.data_blocks, 16, rng), {alive});
      ++trials;
    }
  }
  o.note << codes << " small codes, " << patterns << " erasure patterns exhaustive; " << trials
         << " random trials at k=8";
}

bool repair_once(const CodeDefinition& code, const std::vector<Share>& shares, std::size_t failed,
                 const std::vector<std::size_t>& helpers) {
  const RepairPlan plan = make_repair_plan(code.matrices, failed, helpers);
  std::vector<RepairSymbol> symbols;
  for (std::size_t h : helpers) symbols.push_back(repair_helper(code.field(), shares[h], plan));
  return repair_collect(code.matrices, plan, symbols) == shares[failed];
}

void repair_exactness(Outcome& o) {
  std::mt19937_64 rng(4);
  std::size_t cases = 0;
  for (std::size_t k : {2u, 3u, 4u}) {
    std::vector<CodeDefinition> codes = family(k, 8);
    // Spare nodes so that helper subsets vary.
    codes.push_back(make_code(CodeParams::make(2 * k + 1, k, 2 * k - 2, Variant::Msr),
                              Construction::Vanilla, 8));
    codes.push_back(make_code(CodeParams::msr(k), Construction::Sparse, 16));
    for (const auto& code : codes) {
      const CodeParams& p = code.params();
      const auto x = random_blocks(p.data_blocks, 32, rng);
      for (bool systematic : {false, true}) {
        const auto shares = systematic ? encode_systematic_specific(code, x)
                                       : encode_specific(code, x);
        for (std::size_t f = 0; f < p.n; ++f) {
          const auto others = without(p.n, {f});
          for (const auto& idx : subsets(others.size(), p.d)) {
            std::vector<std::size_t> helpers;
            for (std::size_t i : idx) helpers.push_back(others[i]);
            o.require(repair_once(code, shares, f, helpers),
                      describe(code) + ": repair of node " + std::to_string(f + 1) + " wrong");
            ++cases;
          }
        }
      }
    }
  }
  std::size_t trials = 0;
  for (const auto& code : {make_code(CodeParams::msr(8), Construction::Sparse, 8),
                           make_code(CodeParams::make(17, 8, 14, Variant::Msr),
                                     Construction::Vanilla, 8),
                           make_code(CodeParams::make(12, 8, 10, Variant::Mbr),
                                     Construction::Vanilla, 8)}) {
    const CodeParams& p = code.params();
    for (int t = 0; t < 100; ++t) {
      const auto x = random_blocks(p.data_blocks, 16, rng);
      const auto shares = t % 2 ? encode_systematic_specific(code, x) : encode_specific(code, x);
      std::vector<std::size_t> nodes(p.n);
      std::iota(nodes.begin(), nodes.end(), 0);
      std::shuffle(nodes.begin(), nodes.end(), rng);
      std::vector<std::size_t> helpers(nodes.begin() + 1, nodes.begin() + 1 + static_cast<long>(p.d));
      o.require(repair_once(code, shares, nodes[0], helpers),
                describe(code) + ": random repair wrong");
      ++trials;
    }
  }
  o.note << cases << " exhaustive (failure, helper set) cases; " << trials
         << " random trials at k=8";
}

void repair_accounting(Outcome& o) {
  for (std::size_t k = 2; k <= 16; ++k) {
    const auto code = make_code(CodeParams::msr(k), Construction::Sparse, 8);
    const CodeParams& p = code.params();
    for (std::size_t f = 0; f < p.n; ++f) {
      const std::size_t want = f < p.alpha ? 1 : p.alpha;
      o.require(repair_read_cost(code.matrices, f).blocks_per_helper == want,
                "k=" + std::to_string(k) + " node " + std::to_string(f + 1) + " read count");
    }
  }
  const int expected[][2] = {{8, 43}, {4, 33}};
  for (const auto& [k, pct] : expected) {
    const auto s = repair_cost_summary(
        make_code(CodeParams::msr(static_cast<std::size_t>(k)), Construction::Sparse, 8).matrices);
    const long got = std::lround(100 * s.reduction_headline);
    o.note << "k=" << k << " reduction " << 100 * s.reduction_headline << "% -> " << got << "% ";
    o.require(got == pct, "k=" + std::to_string(k) + " headline reduction");
  }
  o.note << "(reads 1 block for nodes 1..alpha, alpha otherwise, k=2..16)";
}

void systematic_contract(Outcome& o) {
  std::mt19937_64 rng(6);
  std::size_t checked = 0;
  for (unsigned w : {8u, 16u}) {
    for (std::size_t k = 2; k <= 8; ++k) {
      for (auto c : {Construction::Vanilla, Construction::Sparse}) {
        const auto code = make_code(CodeParams::msr(k), c, w);
        const CodeParams& p = code.params();
        const auto x = random_blocks(p.data_blocks, 64, rng);
        const auto linear = encode_linear(systematize(generator_from_pm(code.matrices, code.index)), x);
        const auto specific = encode_systematic_specific(code, x);
        o.require(linear == specific, describe(code) + ": paths disagree");
        for (std::size_t b = 0; b < p.data_blocks; ++b) {
          const auto got = linear[b / p.alpha].blocks.block(b % p.alpha);
          const auto want = x.block(b);
          o.require(std::equal(got.begin(), got.end(), want.begin()),
                    describe(code) + ": symbol " + std::to_string(b + 1) + " not verbatim");
        }
        ++checked;
      }
    }
    for (std::size_t k = 2; k <= 6; ++k) {
      const auto code =
          make_code(CodeParams::make(k + 3, k, k + 1, Variant::Mbr), Construction::Vanilla, w);
      const CodeParams& p = code.params();
      const auto x = random_blocks(p.data_blocks, 64, rng);
      const auto shares = encode_specific(code, x);
      std::set<std::uint32_t> seen;
      for (std::size_t i = 0; i < p.k; ++i) {
        for (std::size_t j = 0; j < p.alpha; ++j) {
          const std::uint32_t b = code.index(i, j);
          seen.insert(b);
          const auto got = shares[i].blocks.block(j);
          const auto want = x.block(b - 1);
          o.require(std::equal(got.begin(), got.end(), want.begin()),
                    describe(code) + ": stored block not verbatim");
        }
      }
      o.require(seen.size() == p.data_blocks, describe(code) + ": data not covered");
      o.require(decode_specific(code, pick(shares, without(p.n, {})), true) == x,
                describe(code) + ": read-out failed");
      ++checked;
    }
  }
  o.note << checked << " codes (MSR via G*inv(G~) and via decode-then-encode; MBR natively)";
}

void performance_ratio(Outcome& o) {
  BenchCode fast;
  fast.params = CodeParams::msr(8);
  fast.construction = Construction::Sparse;
  fast.method = BenchMethod::Linear;
  fast.systematic = true;
  BenchCode slow = fast;
  slow.construction = Construction::Vanilla;
  slow.method = BenchMethod::Specific;
  const std::size_t runs = 1000;
  const auto a = run_bench(BenchOp::Encode, fast, 16384, runs);
  const auto b = run_bench(BenchOp::Encode, slow, 16384, runs);
  const double ratio = a.throughput / b.throughput;
  o.note << "sparse linear " << a.throughput << " MB/s vs vanilla specific " << b.throughput
         << " MB/s, ratio " << ratio << " over " << runs << " runs";
  o.require(ratio >= 2.0, "throughput ratio below 2");
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pmrc_accept_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void end_to_end(Outcome& o) {
  TempDir tmp;
  std::mt19937_64 rng(8);
  struct Setup {
    CodeDefinition code;
    bool systematic;
    std::size_t bs;
  };
  const Setup setups[] = {
      {make_code(CodeParams::msr(3), Construction::Sparse, 8), true, 64},
      {make_code(CodeParams::msr(3), Construction::Vanilla, 8), false, 64},
      {make_code(CodeParams::msr(4), Construction::Sparse, 16), true, 128},
      {make_code(CodeParams::msr(4), Construction::Vanilla, 16), false, 32},
      {make_code(CodeParams::make(6, 3, 4, Variant::Mbr), Construction::Vanilla, 8), true, 64},
      {make_code(CodeParams::msr(8), Construction::Sparse, 8), true, 1024},
  };
  std::size_t files = 0, decodes = 0;
  for (const auto& s : setups) {
    const CodeParams& p = s.code.params();
    const std::size_t stripe = p.data_blocks * s.bs;
    const std::size_t sizes[] = {0, 1, stripe - 1, stripe, stripe + 1, 2 * stripe + 77};
    auto erasures = subsets(p.n, p.n - p.k);
    if (erasures.size() > 60) {
      std::shuffle(erasures.begin(), erasures.end(), rng);
      erasures.resize(60);
    }
    for (std::size_t size : sizes) {
      const fs::path in = tmp.path / "in.bin";
      {
        std::ofstream out(in, std::ios::binary);
        for (std::size_t i = 0; i < size; ++i) out.put(static_cast<char>(rng()));
      }
      const fs::path dir = tmp.path / "shards";
      fs::remove_all(dir);
      const auto paths = split_and_encode(in, s.code, s.bs, s.systematic, dir);
      const auto original = slurp(in);
      for (const auto& gone : erasures) {
        std::vector<fs::path> kept;
        for (std::size_t i : without(p.n, gone)) kept.push_back(paths[i]);
        reassemble(kept, tmp.path / "out.bin");
        o.require(slurp(tmp.path / "out.bin") == original,
                  describe(s.code) + ": size " + std::to_string(size) + " mismatch");
        ++decodes;
      }
      ++files;
    }
  }
  o.note << files << " files (sizes 0, 1, B*bs-1, B*bs, B*bs+1, irregular), " << decodes
         << " reassemblies with n-k shards deleted";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    void (*run)(Outcome&);
  };
  const Criterion criteria[] = {
      {1, "sparsity table", table_sparsity},
      {2, "sparse construction validation sweep", validation_sweep},
      {3, "specific vs linear encode/decode equivalence", oracle_equivalence},
      {4, "repair exactness", repair_exactness},
      {5, "repair read accounting", repair_accounting},
      {6, "systematic contract", systematic_contract},
      {7, "encode throughput ratio", performance_ratio},
      {8, "end-to-end file round trip", end_to_end},
  };
  std::printf("region kernel: %s\n", region_kernel_name());
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s  criterion %d  %s  [%.2f s]  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                seconds_since(t0), o.note.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
