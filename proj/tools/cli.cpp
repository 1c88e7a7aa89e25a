#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <vector>

#include "CLI11.hpp"
#include "pmrc/bench.hpp"
#include "pmrc/code_file.hpp"
#include "pmrc/error.hpp"
#include "pmrc/linearize.hpp"
#include "pmrc/stripe_io.hpp"

namespace pmrc::cli {
namespace fs = std::filesystem;

namespace {

struct CodeOptions {
  std::string variant = "msr";
  std::string construction = "sparse";
  std::size_t k = 8;
  std::size_t n = 0;  // 0: d + 1
  std::size_t d = 0;  // 0: 2k - 2
  unsigned field = 8;

  void attach(CLI::App* app) {
    app->add_option("--variant", variant, "msr or mbr")
        ->check(CLI::IsMember({"msr", "mbr"}))
        ->capture_default_str();
    app->add_option("--construction", construction, "vanilla or sparse")
        ->check(CLI::IsMember({"vanilla", "sparse"}))
        ->capture_default_str();
    app->add_option("--k", k, "data nodes needed to decode")->capture_default_str();
    app->add_option("--n", n, "total nodes (default d+1)");
    app->add_option("--d", d, "repair helpers (default 2k-2)");
    app->add_option("--field", field, "field width w")
        ->check(CLI::IsMember({8u, 16u}))
        ->capture_default_str();
  }

  CodeParams params() const {
    const std::size_t dd = d ? d : (k >= 1 ? 2 * k - 2 : 0);
    const std::size_t nn = n ? n : dd + 1;
    return CodeParams::make(nn, k, dd, parse_variant(variant));
  }
  Construction parsed_construction() const { return parse_construction(construction); }
};

struct BenchOptionsCli {
  CodeOptions code;
  std::string op = "encode";
  std::string method = "linear";
  bool non_systematic = false;
  std::size_t runs = 1000;
  std::optional<std::size_t> failures;
  std::string out;

  void attach(CLI::App* app) {
    code.attach(app);
    app->add_option("--op", op, "encode, decode or repair")
        ->check(CLI::IsMember({"encode", "decode", "repair"}))
        ->capture_default_str();
    app->add_option("--method", method, "specific, linear or rs")
        ->check(CLI::IsMember({"specific", "linear", "rs"}))
        ->capture_default_str();
    app->add_flag("--non-systematic", non_systematic, "use the non-systematic code");
    app->add_option("--runs", runs, "timed repetitions")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--failures", failures, "decode: erase exactly this many nodes");
    app->add_option("--out", out, "CSV output file (default stdout)");
  }

  BenchCode bench_code() const {
    BenchCode c;
    c.params = code.params();
    c.construction = code.parsed_construction();
    c.width = code.field;
    c.systematic = !non_systematic;
    c.method = parse_bench_method(method);
    return c;
  }
};

std::vector<fs::path> shard_paths(const std::vector<std::string>& files, const std::string& dir) {
  std::vector<fs::path> paths(files.begin(), files.end());
  if (!dir.empty()) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".shard") {
        paths.push_back(entry.path());
      }
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw InvalidArgument("no shard files given");
  return paths;
}

void emit_csv(const std::string& path, std::span<const BenchResult> results, std::ostream& out) {
  if (path.empty()) {
    write_csv(out, results);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  write_csv(file, results);
}

void print_report(std::ostream& out, const ValidationReport& report) {
  for (const ValidationCheck& c : report.checks) {
    out << std::left << std::setw(22) << c.name << (c.passed ? "pass" : "FAIL") << "  "
        << c.method;
    if (!c.detail.empty()) out << "  " << c.detail;
    if (!c.witness.empty()) {
      out << "  rows";
      for (std::size_t r : c.witness) out << ' ' << r + 1;
    }
    out << '\n';
  }
  out << "overall " << (report.overall ? "pass" : "FAIL") << '\n';
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Product-matrix regenerating codes: encode, decode, repair, benchmark", "pmrc"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "seed for every randomized choice")
      ->envname("PMRC_SEED")
      ->capture_default_str();

  // gen
  CodeOptions gen_code;
  std::string gen_out, gen_generator;
  bool gen_systematic = false;
  std::optional<std::size_t> gen_samples;
  auto* gen = app.add_subcommand("gen", "write a code definition file");
  gen_code.attach(gen);
  gen->add_option("--out", gen_out, "code definition output (default stdout)");
  gen->add_option("--emit-generator", gen_generator, "also write the generator matrix here");
  gen->add_flag("--systematic", gen_systematic, "emit the systematic generator (MSR)");
  gen->add_option("--samples", gen_samples, "sample oversized subset families");

  // encode
  std::string enc_code, enc_in, enc_dir;
  bool enc_systematic = false;
  std::size_t enc_block = kDefaultBlockSize;
  auto* enc = app.add_subcommand("encode", "split a file into shard files");
  enc->add_option("--code", enc_code, "code definition file")->required();
  enc->add_option("--in", enc_in, "input file")->required();
  enc->add_option("--out-dir", enc_dir, "directory for the shard files")->required();
  enc->add_flag("--systematic", enc_systematic, "store the data verbatim on nodes 1..k");
  enc->add_option("--block-size", enc_block, "bytes per block")->capture_default_str();

  // decode
  std::vector<std::string> dec_files;
  std::string dec_dir, dec_out;
  auto* dec = app.add_subcommand("decode", "reassemble the original file from shards");
  dec->add_option("shards", dec_files, "shard files");
  dec->add_option("--dir", dec_dir, "take every *.shard file in this directory");
  dec->add_option("--out", dec_out, "output file")->required();

  // repair
  std::vector<std::string> rep_files;
  std::string rep_dir, rep_out;
  std::size_t rep_node = 0;
  auto* rep = app.add_subcommand("repair", "regenerate one lost shard");
  rep->add_option("shards", rep_files, "surviving shard files");
  rep->add_option("--dir", rep_dir, "take every *.shard file in this directory");
  rep->add_option("--node", rep_node, "1-based index of the lost node")->required();
  rep->add_option("--out", rep_out, "output path (default node_NNN.shard next to the shards)");

  // validate
  CodeOptions val_code;
  std::string val_file;
  std::optional<std::size_t> val_samples;
  std::size_t val_limit = ValidationOptions{}.exhaustive_limit;
  bool val_no_structural = false;
  auto* val = app.add_subcommand("validate", "check the product-matrix constraints");
  val_code.attach(val);
  val->add_option("--code", val_file, "validate this definition instead of building one");
  val->add_option("--samples", val_samples, "sample oversized subset families");
  val->add_option("--exhaustive-limit", val_limit, "largest family enumerated exhaustively")
      ->capture_default_str();
  val->add_flag("--no-structural", val_no_structural, "do not accept structural certificates");

  // bench
  BenchOptionsCli bench_opts;
  std::size_t bench_block = kDefaultBlockSize;
  auto* bench = app.add_subcommand("bench", "time one operation");
  bench_opts.attach(bench);
  bench->add_option("--block-size", bench_block, "bytes per block")->capture_default_str();

  // sweep
  BenchOptionsCli sweep_opts;
  std::vector<std::size_t> sweep_sizes;
  auto* sweep = app.add_subcommand("sweep", "time one operation across block sizes");
  sweep_opts.attach(sweep);
  sweep->add_option("--sizes", sweep_sizes, "block sizes (default 1 KiB .. 1 MiB)");

  // sparsity
  std::vector<std::size_t> sp_ks{4, 8, 16};
  unsigned sp_field = 8;
  bool sp_exact = false;
  auto* sp = app.add_subcommand("sparsity", "percentage of zeros in the generator matrices");
  sp->add_option("--k", sp_ks, "values of k (MSR, n = 2k-1)")->capture_default_str();
  sp->add_option("--field", sp_field, "field width w")
      ->check(CLI::IsMember({8u, 16u}))
      ->capture_default_str();
  sp->add_flag("--exact", sp_exact, "print unrounded percentages");

  std::vector<std::string> argv_storage{"pmrc"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen) {
      const CodeParams params = gen_code.params();
      const CodeDefinition code =
          make_code(params, gen_code.parsed_construction(), gen_code.field);
      ValidationOptions vo;
      vo.samples = gen_samples;
      vo.seed = seed;
      const ValidationReport report = validate_construction(code.matrices, vo);
      if (!report.overall) {
        print_report(err, report);
        throw InvalidConstruction("generated code failed validation");
      }
      if (gen_out.empty()) {
        write_code_definition(out, code);
      } else {
        save_code_definition(gen_out, code);
      }
      if (!gen_generator.empty()) {
        GeneratorMatrix gm = generator_from_pm(code.matrices, code.index);
        if (gen_systematic) gm = systematize(gm);
        std::ofstream file(gen_generator);
        if (!file) throw Error("cannot open '" + gen_generator + "' for writing");
        write_text(file, gm.g);
      }
      err << "validation passed for n=" << params.n << " k=" << params.k << " d=" << params.d
          << '\n';
    } else if (*enc) {
      const CodeDefinition code = load_code_definition(enc_code);
      const auto paths = split_and_encode(enc_in, code, enc_block, enc_systematic, enc_dir);
      out << "wrote " << paths.size() << " shards to " << enc_dir << '\n';
    } else if (*dec) {
      const auto paths = shard_paths(dec_files, dec_dir);
      reassemble(paths, dec_out);
      out << "reassembled " << dec_out << " from " << paths.size() << " shards\n";
    } else if (*rep) {
      if (rep_node == 0) throw InvalidArgument("--node is 1-based");
      const auto paths = shard_paths(rep_files, rep_dir);
      fs::path target = rep_out;
      if (target.empty()) target = paths.front().parent_path() / shard_file_name(rep_node - 1);
      const std::size_t reads = repair_shard(paths, rep_node - 1, target);
      out << "regenerated " << target.string() << " (" << reads << " blocks read)\n";
    } else if (*val) {
      const CodeDefinition code = val_file.empty()
                                      ? make_code(val_code.params(),
                                                  val_code.parsed_construction(), val_code.field)
                                      : load_code_definition(val_file);
      ValidationOptions vo;
      vo.samples = val_samples;
      vo.exhaustive_limit = val_limit;
      vo.allow_structural = !val_no_structural;
      vo.seed = seed;
      const ValidationReport report = validate_construction(code.matrices, vo);
      print_report(out, report);
      return report.overall ? 0 : 1;
    } else if (*bench) {
      const BenchResult r = run_bench(parse_bench_op(bench_opts.op), bench_opts.bench_code(),
                                      bench_block, bench_opts.runs,
                                      BenchOptions{seed, bench_opts.failures});
      emit_csv(bench_opts.out, std::span(&r, 1), out);
    } else if (*sweep) {
      if (sweep_sizes.empty()) {
        for (std::size_t s = 1024; s <= (1u << 20); s *= 2) sweep_sizes.push_back(s);
      }
      const auto results =
          sweep_block_size(parse_bench_op(sweep_opts.op), sweep_opts.bench_code(), sweep_sizes,
                           sweep_opts.runs, BenchOptions{seed, sweep_opts.failures});
      emit_csv(sweep_opts.out, results, out);
    } else if (*sp) {
      const auto rows = sparsity_report(sp_ks, sp_field);
      write_sparsity_table(out, rows);
      if (sp_exact) {
        for (const SparsityRow& r : rows) {
          out << "k=" << r.k << std::fixed << std::setprecision(3);
          for (double v : r.exact) out << ' ' << v;
          out << '\n';
        }
      }
    }
  } catch (const std::exception& e) {
    err << "pmrc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace pmrc::cli
