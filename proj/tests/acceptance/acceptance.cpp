// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any hard criterion fails; the throughput floor only warns.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include "augkit/bench.hpp"
#include "augkit/image_io.hpp"
#include "augkit/pipeline.hpp"
#include "augkit/policy.hpp"
#include "augkit/stats.hpp"

using namespace augkit;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  bool soft = false;
};

Image noise(int w, int h, std::uint64_t seed) {
  Image img(w, h);
  RngState rng(seed, 0xACCE97);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.next_u64() >> 56);
  return img;
}

RngState draw_stream(std::uint64_t seed, std::uint64_t i) { return {seed, derive_stream(seed, i, 0)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict ta_uniformity() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = PolicyConfig::ta(build_space(SpaceName::kRA));
  const auto ops = cfg.effective_ops();
  const std::size_t levels = cfg.effective_strengths().size();
  std::vector<std::uint64_t> counts(ops.size() * levels, 0);
  const Image img = noise(4, 4, 1);
  constexpr std::uint64_t kDraws = 1'000'000;
  for (std::uint64_t i = 0; i < kDraws; ++i) {
    RngState rng = draw_stream(2024, i);
    const AppliedOp a = ta_transform(img, cfg, rng).second.ops.at(0);
    const auto pos = static_cast<std::size_t>(std::find(ops.begin(), ops.end(), a.op) - ops.begin());
    ++counts[pos * levels + static_cast<std::size_t>(a.m)];
  }
  const auto u = stats::uniformity_test(counts);
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << u.cells << " cells, chi2=" << u.statistic << ", p=" << u.p_value << ", " << secs << " s";
  return {u.cells == 434 && u.p_value > 0.001 && secs < 60.0, d.str()};
}

Verdict space_algebra() {
  auto ops = [](SpaceName n) {
    const auto k = build_space(n).op_kinds();
    return std::set<OpKind>(k.begin(), k.end());
  };
  auto minus = [](std::set<OpKind> s, std::initializer_list<OpKind> drop) {
    for (auto op : drop) s.erase(op);
    return s;
  };
  const std::map<SpaceName, std::size_t> sizes{{SpaceName::kRA, 14}, {SpaceName::kAA, 17},
                                               {SpaceName::kUA, 16}, {SpaceName::kOHL, 15},
                                               {SpaceName::kFull, 21}, {SpaceName::kWide, 14}};
  Verdict v;
  std::ostringstream d;
  for (const auto& [name, size] : sizes) {
    const auto got = build_space(name).ops().size();
    d << space_name(name) << "=" << got << " ";
    v.pass &= got == size;
  }
  const auto aa = ops(SpaceName::kAA);
  auto ohl = ops(SpaceName::kRA);
  ohl.insert(OpKind::kInvert);
  const bool identities =
      ops(SpaceName::kRA) == minus(aa, {OpKind::kSamplePairing, OpKind::kInvert, OpKind::kCutout}) &&
      ops(SpaceName::kUA) == minus(aa, {OpKind::kSamplePairing}) &&
      ops(SpaceName::kAAminusInvert) == minus(aa, {OpKind::kInvert}) && ops(SpaceName::kOHL) == ohl &&
      ops(SpaceName::kWide) == ops(SpaceName::kRA) &&
      minus(ops(SpaceName::kFull), {OpKind::kBlur, OpKind::kSmooth, OpKind::kFlipLr, OpKind::kFlipUd}) == aa;
  v.pass &= identities;
  d << (identities ? "set identities hold" : "set identity violated");
  v.detail = d.str();
  return v;
}

Verdict identity_at_zero() {
  const Image img = noise(32, 32, 3);
  const Image partner = noise(32, 32, 4);
  int checked = 0, failed = 0;
  std::string first;
  for (SpaceName n : all_space_names()) {
    const auto space = build_space(n);
    for (const auto& s : space.ops()) {
      if (s.range.parameterless) continue;
      ++checked;
      if (!(apply_resolved(img, s.kind, 0, space, OpDraws{1, Point{16, 16}}, &partner) == img)) {
        ++failed;
        if (first.empty()) first = std::string(space_name(n)) + "/" + std::string(op_name(s.kind));
      }
    }
  }
  std::ostringstream d;
  d << checked << " (space, op) pairs, " << failed << " not identical" << (first.empty() ? "" : ", first " + first);
  return {failed == 0, d.str()};
}

Verdict pixel_oracles() {
  const auto ra = build_space(SpaceName::kRA);
  int failures = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Image img = noise(32, 32, 100 + i);
    const Image other = noise(32, 32, 1000 + i);
    const Image inv = pixel_map(img, PixelMap::invert());
    const bool ok =
        pixel_map(inv, PixelMap::invert()) == img && apply_resolved(img, OpKind::kSolarize, 30, ra, {}) == inv &&
        apply_resolved(img, OpKind::kPosterize, 0, ra, {}) == img &&
        enhance(img, EnhanceKind::kColor, 1.0) == img && enhance(img, EnhanceKind::kContrast, 1.0) == img &&
        enhance(img, EnhanceKind::kBrightness, 1.0) == img && enhance(img, EnhanceKind::kSharpness, 1.0) == img &&
        flip(flip(img, FlipAxis::kHorizontal), FlipAxis::kHorizontal) == img &&
        flip(flip(img, FlipAxis::kVertical), FlipAxis::kVertical) == img && blend_pair(img, other, 0.0) == img;
    failures += !ok;
  }
  return {failures == 0, std::to_string(100 - failures) + "/100 images byte-exact on all identities"};
}

Verdict strength_subsets() {
  const Image img = noise(4, 4, 5);
  Verdict v;
  std::ostringstream d;
  for (const std::vector<int>& subset : {std::vector<int>{30}, {0, 30}, {0, 15, 30}}) {
    auto cfg = PolicyConfig::ta(build_space(SpaceName::kRA));
    cfg.strength_subset = subset;
    std::uint64_t inside = 0;
    constexpr std::uint64_t kRecords = 100'000;
    for (std::uint64_t i = 0; i < kRecords; ++i) {
      RngState rng = draw_stream(subset.size(), i);
      const int m = ta_transform(img, cfg, rng).second.ops.at(0).m;
      inside += std::find(subset.begin(), subset.end(), m) != subset.end();
    }
    d << "{";
    for (std::size_t k = 0; k < subset.size(); ++k) d << (k ? "," : "") << subset[k];
    d << "}: " << inside << "/" << kRecords << "  ";
    v.pass &= inside == kRecords;
  }
  v.detail = d.str();
  return v;
}

Verdict op_subset_marginals() {
  const auto space = build_space(SpaceName::kRA);
  Verdict v;
  std::ostringstream d;
  for (int k : {1, 4, 8, 14}) {
    std::vector<std::uint64_t> counts(space.ops().size(), 0);
    const auto kinds = space.op_kinds();
    for (std::uint64_t i = 0; i < 100'000; ++i) {
      RngState rng = draw_stream(static_cast<std::uint64_t>(k) + 50, i);
      for (OpKind op : sample_op_subset(space, k, rng)) {
        ++counts[static_cast<std::size_t>(std::find(kinds.begin(), kinds.end(), op) - kinds.begin())];
      }
    }
    const auto u = stats::uniformity_test(counts);
    d << "k=" << k << " p=" << u.p_value << "  ";
    v.pass &= u.p_value > 0.001;
  }
  v.detail = d.str();
  return v;
}

Verdict ua_chain_length() {
  const auto cfg = PolicyConfig::ua(build_space(SpaceName::kUA));
  const Image img = noise(2, 2, 6);
  constexpr std::uint64_t kDraws = 1'000'000;
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < kDraws; ++i) {
    RngState rng = draw_stream(7, i);
    total += ua_transform(img, cfg, rng).second.ops.size();
  }
  const double mean = static_cast<double>(total) / kDraws;
  std::ostringstream d;
  d << "mean applied ops " << mean << " over " << kDraws << " draws";
  return {std::fabs(mean - 1.0) <= 0.01, d.str()};
}

std::map<std::string, std::vector<std::uint8_t>> snapshot(const fs::path& dir) {
  std::map<std::string, std::vector<std::uint8_t>> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = read_file(e.path());
  return files;
}

Verdict determinism(const fs::path& work) {
  const fs::path input = work / "cifar.bin";
  std::vector<std::uint8_t> blob;
  for (int i = 0; i < 40; ++i) {
    const auto rec = encode_cifar_record(noise(32, 32, 300 + i), static_cast<std::uint8_t>(i % 10));
    blob.insert(blob.end(), rec.begin(), rec.end());
  }
  write_file(input, blob);
  const auto chain = ChainConfig::cifar(PolicyConfig::ta(build_space(SpaceName::kFull)));
  CorpusOptions opts;
  opts.replicas = 4;
  opts.seed = 12345;
  opts.batch_size = 16;
  std::map<std::string, std::vector<std::uint8_t>> reference;
  bool identical = true;
  for (int workers : {1, 4, 8}) {
    opts.workers = workers;
    const fs::path out = work / ("w" + std::to_string(workers));
    augment_corpus({DatasetFormat::kCifarBinary, input}, chain, out, opts);
    const auto files = snapshot(out);
    if (reference.empty()) {
      reference = files;
    } else {
      identical &= files == reference;
    }
  }
  const fs::path fresh = work / "replayed";
  const auto r = replay_corpus(work / "w1" / kManifestName, std::nullopt, fresh);
  bool replayed = r.ok() && r.written == 160;
  for (const auto& [name, bytes] : snapshot(fresh)) replayed &= reference.at(name) == bytes;
  std::ostringstream d;
  d << reference.size() - 1 << " outputs " << (identical ? "identical" : "DIFFER") << " across workers {1,4,8}; replay "
    << r.written << "/160 files " << (replayed ? "byte-identical" : "DIVERGED");
  return {identical && replayed, d.str()};
}

Verdict normalization_order() {
  const auto chain = ChainConfig::cifar(PolicyConfig::ta(build_space(SpaceName::kAA)));
  std::uint64_t region_px = 0, bad = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Image img = noise(32, 32, 5000 + i);
    RngState rng(99, i);
    const ChainResult r = run_chain(img, chain, rng);
    const auto& cut = r.record.post.at(0);
    const Rect rect = cutout_rect(32, 32, cut.size, cut.point);
    for (int y = rect.y0; y < rect.y1; ++y)
      for (int x = rect.x0; x < rect.x1; ++x) {
        ++region_px;
        bad += !(r.image.pixel(x, y) == chain.fill);
        for (int c = 0; c < 3; ++c) bad += r.tensor->at(x, y, c) != 0.0f;
      }
  }
  std::ostringstream d;
  d << region_px << " cutout pixels over 500 images, " << bad << " violations";
  return {bad == 0 && region_px > 0, d.str()};
}

// Mean halfwidth and mean s/sqrt(n) over `reps` normal samples of size n.
std::pair<double, double> mean_interval(std::size_t n, int reps, std::uint64_t seed) {
  double hw = 0, se = 0;
  const double t = stats::student_t_quantile(0.975, static_cast<double>(n - 1));
  for (int r = 0; r < reps; ++r) {
    RngState rng(seed, static_cast<std::uint64_t>(r));
    std::vector<double> v(n);
    for (auto& x : v) {
      // Box-Muller
      const double u1 = 1.0 - rng.uniform01(), u2 = rng.uniform01();
      x = 5.0 + 2.0 * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }
    const auto ci = stats::confidence_interval(v);
    hw += ci.halfwidth;
    se += ci.halfwidth / t;
  }
  return {hw / reps, se / reps};
}

Verdict confidence_intervals() {
  const std::vector<double> pair{0.0, 1.0};
  const double hw2 = stats::confidence_interval(pair).halfwidth;
  const std::vector<double> flat(20, 0.73);
  const double hw_flat = stats::confidence_interval(flat).halfwidth;

  constexpr int kReps = 2000;
  const auto [hw10, se10] = mean_interval(10, kReps, 1);
  const auto [hw100, se100] = mean_interval(100, kReps, 2);
  const auto [hw30, se30] = mean_interval(30, kReps, 3);
  const auto [hw120, se120] = mean_interval(120, kReps, 4);
  const auto [hw480, se480] = mean_interval(480, kReps, 5);
  (void)se30, (void)se120, (void)se480;

  const double want10 = std::sqrt(10.0), want4 = 2.0;
  const double se_ratio = se10 / se100;
  const double raw_ratio = hw10 / hw100;
  const double r1 = hw30 / hw120, r2 = hw120 / hw480;
  auto within = [](double got, double want) { return std::fabs(got / want - 1.0) <= 0.10; };

  const bool pass = std::fabs(hw2 - 6.353) <= 1e-3 && hw_flat == 0.0 && within(se_ratio, want10) &&
                    within(r1, want4) && within(r2, want4);
  std::ostringstream d;
  d << "[0,1] halfwidth " << hw2 << "; constant " << hw_flat << "; s/sqrt(n) n=10->100 ratio " << se_ratio
    << " (sqrt 10 = " << want10 << "); halfwidth n=30->120 " << r1 << ", 120->480 " << r2
    << " (expect 2); info: raw halfwidth n=10->100 " << raw_ratio << " includes t(9)/t(99) = 1.14";
  return {pass, d.str()};
}

Verdict throughput() {
  const auto chain = ChainConfig::none(PolicyConfig::ta(build_space(SpaceName::kRA)));
  const BenchResult r = bench_throughput(chain, 32, 2.0, 1, 42);
  std::ostringstream d;
  d << r.aggregate << " images/s (floor 2000), " << r.images << " images in " << r.seconds << " s";
  return {r.aggregate >= 2000.0, d.str(), true};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / ("augkit_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"TA uniformity over 434 (op, m) cells", ta_uniformity},
      {"space algebra", space_algebra},
      {"identity at m=0", identity_at_zero},
      {"pixel oracles", pixel_oracles},
      {"strength-subset containment", strength_subsets},
      {"op-subset marginals", op_subset_marginals},
      {"UA mean chain length", ua_chain_length},
      {"determinism and replay", [&] { return determinism(work); }},
      {"normalization before trailing cutout", normalization_order},
      {"confidence intervals", confidence_intervals},
      {"throughput", throughput},
  };

  int hard_failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const char* status = v.pass ? "PASS" : (v.soft ? "WARN" : "FAIL");
    std::printf("criterion %2zu %-4s %s: %s\n", i + 1, status, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass && !v.soft) ++hard_failures;
  }
  fs::remove_all(work);
  std::printf("%s (%d hard failure%s)\n", hard_failures == 0 ? "ACCEPTED" : "REJECTED", hard_failures,
              hard_failures == 1 ? "" : "s");
  return hard_failures == 0 ? 0 : 1;
}
