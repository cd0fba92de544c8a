#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "augkit/bench.hpp"
#include "augkit/image_io.hpp"
#include "augkit/manifest.hpp"
#include "augkit/pipeline.hpp"
#include "augkit/selfcheck.hpp"
#include "augkit/stats.hpp"

namespace augkit::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("AUG_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("AUG_SEED is not an unsigned integer: ") + env);
  }
  return 0;
}

struct PolicyFlags {
  std::string space = "ra";
  std::string policy = "ta";
  std::optional<int> ra_n;
  std::optional<int> ra_m;
  std::vector<int> strengths;
  std::vector<std::string> ops;
  std::string chain = "none";
  std::string flip_axis = "horizontal";

  void add_to(CLI::App* sub) {
    sub->add_option("--space", space, "Augmentation space: ra, aa, aa-invert, ua, ohl, wide, full")
        ->capture_default_str();
    sub->add_option("--policy", policy, "Policy: ta, ra, ua")->capture_default_str();
    sub->add_option("--ra-n", ra_n, "RA: number of chained ops (1..3)");
    sub->add_option("--ra-m", ra_m, "RA: fixed strength (0..30)");
    sub->add_option("--strengths", strengths, "Restrict strengths, e.g. 0,15,30")->delimiter(',');
    sub->add_option("--ops", ops, "Restrict ops, e.g. rotate,invert")->delimiter(',');
    sub->add_option("--chain", chain, "Standard chain around the policy: none, cifar, svhn")
        ->capture_default_str();
    sub->add_option("--flip-axis", flip_axis, "Mirror axis of the cifar chain: horizontal, vertical")
        ->capture_default_str();
  }

  ChainConfig build() const {
    const PolicyKind kind = parse_policy(policy);
    if (kind != PolicyKind::kRA && (ra_n || ra_m)) {
      throw UsageError("--ra-n/--ra-m are only valid with --policy ra");
    }
    if (kind == PolicyKind::kRA && !strengths.empty()) {
      throw UsageError("--strengths does not apply to --policy ra (use --ra-m)");
    }
    AugmentationSpace space_def = build_space(space);
    PolicyConfig cfg;
    switch (kind) {
      case PolicyKind::kTA:
        cfg = PolicyConfig::ta(std::move(space_def));
        break;
      case PolicyKind::kRA:
        cfg = PolicyConfig::ra(std::move(space_def), ra_n.value_or(2), ra_m.value_or(9));
        break;
      case PolicyKind::kUA:
        cfg = PolicyConfig::ua(std::move(space_def));
        break;
    }
    if (!strengths.empty()) cfg.strength_subset = strengths;
    if (!ops.empty()) {
      std::vector<OpKind> kinds;
      for (const auto& name : ops) {
        const auto op = parse_op(name);
        if (!op) throw UsageError("unknown op '" + name + "'");
        kinds.push_back(*op);
      }
      cfg.op_subset = std::move(kinds);
    }
    cfg.validate();
    FlipAxis axis;
    if (flip_axis == "horizontal") {
      axis = FlipAxis::kHorizontal;
    } else if (flip_axis == "vertical") {
      axis = FlipAxis::kVertical;
    } else {
      throw UsageError("--flip-axis must be horizontal or vertical");
    }
    return ChainConfig::preset(parse_chain_preset(chain), std::move(cfg), axis);
  }
};

int cmd_augment(const std::string& input, const std::string& format, const std::string& out_dir,
                const PolicyFlags& pf, int replicas, std::optional<std::uint64_t> seed_flag,
                int workers, int batch_size, std::ostream& out, std::ostream& err) {
  const ChainConfig chain = pf.build();
  if (replicas < 1) throw UsageError("--replicas must be >= 1");
  if (workers < 1) throw UsageError("--workers must be >= 1");
  CorpusOptions opts;
  opts.replicas = replicas;
  opts.seed = resolve_seed(seed_flag);
  opts.workers = workers;
  opts.batch_size = batch_size;
  const DatasetSource src{parse_format(format), input};

  const CorpusSummary s = augment_corpus(src, chain, out_dir, opts);
  for (const auto& e : s.ingest_errors) err << "warning: " << e << "\n";
  Json j;
  j["command"] = "augment";
  j["out"] = out_dir;
  j["images"] = s.images;
  j["replicas"] = replicas;
  j["outputs"] = s.outputs;
  j["seed"] = opts.seed;
  j["workers"] = workers;
  j["ingest_errors"] = s.ingest_errors;
  // Timing stays out of the JSON so stdout depends only on flags and seed.
  err << "augmented " << s.images << " images into " << s.outputs << " files in " << s.seconds
      << " s\n";
  out << j.dump() << "\n";
  return kExitOk;
}

int cmd_spaces(const std::optional<std::string>& name, std::ostream& out) {
  if (name) {
    out << space_to_json(build_space(*name)).dump(2) << "\n";
    return kExitOk;
  }
  Json list = Json::array();
  for (SpaceName n : all_space_names()) {
    const auto space = build_space(n);
    list.push_back({{"name", std::string(space_name(n))},
                    {"ops", space.ops().size()},
                    {"levels", space.levels().size()}});
  }
  out << Json{{"spaces", list}}.dump(2) << "\n";
  return kExitOk;
}

int cmd_selfcheck(std::uint64_t draws, std::optional<std::uint64_t> seed_flag,
                  const std::string& fault, std::ostream& out, std::ostream& err) {
  SelfcheckOptions opts;
  opts.draws = draws;
  opts.seed = resolve_seed(seed_flag);
  if (fault == "monotonicity") {
    opts.corrupt_strength_mapping = true;
  } else if (!fault.empty()) {
    throw UsageError("unknown fault '" + fault + "'");
  }
  if (draws < kMinSelfcheckDraws) {
    throw UsageError("--draws must be at least " + std::to_string(kMinSelfcheckDraws));
  }
  const auto results = run_selfcheck(opts);
  Json checks = Json::array();
  bool all = true;
  for (const auto& r : results) {
    checks.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    if (!r.passed) {
      all = false;
      err << "selfcheck failed: " << r.name << ": " << r.detail << "\n";
    }
  }
  out << Json{{"command", "selfcheck"}, {"passed", all}, {"draws", draws}, {"checks", checks}}.dump()
      << "\n";
  return all ? kExitOk : kExitFailure;
}

int cmd_bench(const PolicyFlags& pf, int size, double duration, int workers,
              std::optional<std::uint64_t> seed_flag, std::ostream& out) {
  const ChainConfig chain = pf.build();
  if (duration < 1.0) throw UsageError("--duration must be at least 1 second");
  if (workers < 1) throw UsageError("--workers must be >= 1");
  const BenchResult r = bench_throughput(chain, size, duration, workers, resolve_seed(seed_flag));
  Json j;
  j["command"] = "bench";
  j["policy"] = pf.policy;
  j["space"] = pf.space;
  j["chain"] = pf.chain;
  j["size"] = size;
  j["workers"] = workers;
  j["per_worker"] = r.per_worker;
  j["aggregate"] = r.aggregate;
  j["images"] = r.images;
  j["seconds"] = r.seconds;
  out << j.dump() << "\n";
  return kExitOk;
}

int cmd_ci(const std::vector<double>& values, const std::string& file, double level,
           std::ostream& out) {
  std::vector<double> samples = values;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file);
    double v = 0.0;
    while (in >> v) samples.push_back(v);
    if (!in.eof()) throw UsageError("non-numeric value in " + file);
  }
  stats::CiResult ci;
  try {
    ci = stats::confidence_interval(samples, level);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out << Json{{"command", "ci"},
              {"mean", ci.mean},
              {"halfwidth", ci.halfwidth},
              {"n", ci.n},
              {"level", ci.level}}
             .dump()
      << "\n";
  return kExitOk;
}

int cmd_replay(const std::string& manifest, const std::string& input, const std::string& out_dir,
               std::ostream& out, std::ostream& err) {
  const std::filesystem::path dir =
      out_dir.empty() ? std::filesystem::path(manifest).parent_path() : std::filesystem::path(out_dir);
  const ReplaySummary s = replay_corpus(
      manifest, input.empty() ? std::nullopt : std::optional<std::filesystem::path>(input), dir);
  Json j;
  j["command"] = "replay";
  j["records"] = s.records;
  j["matched"] = s.matched;
  j["written"] = s.written;
  j["mismatched"] = s.mismatched;
  j["first_mismatch"] = s.first_mismatch;
  j["errors"] = s.errors;
  out << j.dump() << "\n";
  if (!s.ok()) {
    err << "replay mismatch; first divergent file: " << s.first_mismatch << "\n";
    for (const auto& e : s.errors) err << "  " << e << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic image augmentation engine (TrivialAugment, RandAugment, UniformAugment)",
               "augkit"};
  app.require_subcommand(1);

  // augment
  auto* augment = app.add_subcommand("augment", "Augment a dataset into a PNG corpus with manifest");
  std::string input, format = "folder", out_dir;
  PolicyFlags aug_flags;
  int replicas = 1, workers = default_workers(), batch_size = kDefaultBatchSize;
  std::optional<std::uint64_t> seed;
  augment->add_option("--input", input, "Input folder or CIFAR .bin file/directory")->required();
  augment->add_option("--format", format, "Input format: folder, cifar")->capture_default_str();
  augment->add_option("--out", out_dir, "Output directory")->required();
  aug_flags.add_to(augment);
  augment->add_option("--replicas", replicas, "Augmented copies per image")->capture_default_str();
  augment->add_option("--seed", seed, "Master seed (falls back to AUG_SEED, then 0)");
  augment->add_option("--workers", workers, "Worker threads")->capture_default_str();
  augment->add_option("--batch-size", batch_size, "Sample-pairing partner group size")
      ->capture_default_str();

  // spaces
  auto* spaces = app.add_subcommand("spaces", "List augmentation spaces or dump one as JSON");
  std::optional<std::string> space_name_flag;
  spaces->add_option("--name", space_name_flag, "Space to dump");

  // selfcheck
  auto* selfcheck = app.add_subcommand("selfcheck", "Run pixel oracles, replay and uniformity checks");
  std::uint64_t draws = 1'000'000;
  std::optional<std::uint64_t> check_seed;
  std::string fault;
  selfcheck->add_option("--draws", draws, "TA draws for the uniformity test (>= 100000)")
      ->capture_default_str();
  selfcheck->add_option("--seed", check_seed, "Seed");
  selfcheck->add_option("--fault", fault)->group("");

  // bench
  auto* bench = app.add_subcommand("bench", "Measure augmentation throughput");
  PolicyFlags bench_flags;
  int size = 32, bench_workers = 1;
  double duration = 1.0;
  std::optional<std::uint64_t> bench_seed;
  bench_flags.add_to(bench);
  bench->add_option("--size", size, "Square image side")->capture_default_str();
  bench->add_option("--duration", duration, "Seconds (>= 1)")->capture_default_str();
  bench->add_option("--workers", bench_workers, "Worker threads")->capture_default_str();
  bench->add_option("--seed", bench_seed, "Seed");

  // ci
  auto* ci = app.add_subcommand("ci", "Confidence interval of a sample (Student t)");
  std::vector<double> values;
  std::string values_file;
  double level = 0.95;
  ci->add_option("--values", values, "Comma separated samples")->delimiter(',');
  ci->add_option("--file", values_file, "File with one sample per line");
  ci->add_option("--level", level, "Confidence level")->capture_default_str();

  // replay
  auto* replay = app.add_subcommand("replay", "Regenerate a corpus from its manifest and compare");
  std::string manifest, replay_input, replay_out;
  replay->add_option("--manifest", manifest, "manifest.jsonl")->required();
  replay->add_option("--input", replay_input, "Override the source path from the manifest header");
  replay->add_option("--out", replay_out, "Corpus directory (default: manifest directory)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (augment->parsed()) {
      return cmd_augment(input, format, out_dir, aug_flags, replicas, seed, workers, batch_size, out,
                         err);
    }
    if (spaces->parsed()) return cmd_spaces(space_name_flag, out);
    if (selfcheck->parsed()) return cmd_selfcheck(draws, check_seed, fault, out, err);
    if (bench->parsed()) return cmd_bench(bench_flags, size, duration, bench_workers, bench_seed, out);
    if (ci->parsed()) return cmd_ci(values, values_file, level, out);
    if (replay->parsed()) return cmd_replay(manifest, replay_input, replay_out, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace augkit::cli
