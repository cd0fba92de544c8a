#include "augkit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "augkit/image_io.hpp"
#include "augkit/manifest.hpp"

namespace augkit {

namespace fs = std::filesystem;

ChainPreset parse_chain_preset(std::string_view name) {
  if (name == "none") return ChainPreset::kNone;
  if (name == "cifar") return ChainPreset::kCifar;
  if (name == "svhn") return ChainPreset::kSvhn;
  throw ConfigError("unknown chain '" + std::string(name) + "'; valid: none, cifar, svhn");
}

ChainConfig ChainConfig::none(std::optional<PolicyConfig> policy) {
  ChainConfig c;
  c.policy = std::move(policy);
  return c;
}

ChainConfig ChainConfig::cifar(PolicyConfig policy, FlipAxis mirror_axis) {
  ChainConfig c;
  c.pre_ops = {MirrorStep{mirror_axis, 0.5}, PadCropStep{4}};
  c.policy = std::move(policy);
  c.post_ops = {FixedCutoutStep{16}};
  c.normalization = kCifar10Normalization;
  return c;
}

ChainConfig ChainConfig::svhn(PolicyConfig policy) {
  ChainConfig c;
  c.policy = std::move(policy);
  c.post_ops = {FixedCutoutStep{16}};
  return c;
}

ChainConfig ChainConfig::preset(ChainPreset preset, PolicyConfig policy, FlipAxis mirror_axis) {
  switch (preset) {
    case ChainPreset::kNone:
      return none(std::move(policy));
    case ChainPreset::kCifar:
      return cifar(std::move(policy), mirror_axis);
    case ChainPreset::kSvhn:
      return svhn(std::move(policy));
  }
  throw ConfigError("unhandled chain preset");
}

void ChainConfig::validate() const {
  auto check = [](const ChainStep& step) {
    if (const auto* m = std::get_if<MirrorStep>(&step)) {
      if (!(m->prob >= 0.0 && m->prob <= 1.0)) throw ConfigError("mirror probability must be in [0, 1]");
    } else if (const auto* p = std::get_if<PadCropStep>(&step)) {
      if (p->pad < 0) throw ConfigError("pad must be non-negative");
    } else if (std::get<FixedCutoutStep>(step).side < 0) {
      throw ConfigError("cutout side must be non-negative");
    }
  };
  for (const auto& s : pre_ops) check(s);
  int cutouts = 0;
  for (const auto& s : post_ops) {
    check(s);
    if (std::holds_alternative<FixedCutoutStep>(s)) ++cutouts;
  }
  if (cutouts > 1) throw ConfigError("at most one fixed cutout is allowed after the policy");
  if (normalization) {
    for (double s : normalization->std) {
      if (!(s > 0.0)) throw ConfigError("normalization std must be positive");
    }
  }
  if (policy) policy->validate();
}

bool ChainConfig::has_trailing_cutout() const {
  return !post_ops.empty() && std::holds_alternative<FixedCutoutStep>(post_ops.back());
}

Tensor normalize(const Image& img, const Normalization& norm) {
  Tensor t{img.width(), img.height(), std::vector<float>(img.data().size())};
  const auto px = img.data();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const int c = static_cast<int>(i % 3);
    t.data[i] = static_cast<float>((px[i] / 255.0 - norm.mean[c]) / norm.std[c]);
  }
  return t;
}

namespace {

Image apply_step_record(const Image& img, const StepRecord& s, Rgb fill) {
  switch (s.kind) {
    case StepRecord::Kind::kMirror:
      return flip(img, s.axis);
    case StepRecord::Kind::kPadCrop:
      return pad_and_crop(img, s.size, s.point);
    case StepRecord::Kind::kFixedCutout:
      return cutout_side(img, s.size, s.point, fill);
  }
  return img;
}

// Draws the step's randomness; returns nullopt for a mirror that did not fire.
std::optional<StepRecord> draw_step(const ChainStep& step, const Image& img, RngState& rng) {
  if (const auto* m = std::get_if<MirrorStep>(&step)) {
    if (!rng.bernoulli(m->prob)) return std::nullopt;
    return StepRecord{StepRecord::Kind::kMirror, m->axis, 0, {}};
  }
  if (const auto* p = std::get_if<PadCropStep>(&step)) {
    const int x = rng.uniform_int(0, 2 * p->pad);
    const int y = rng.uniform_int(0, 2 * p->pad);
    return StepRecord{StepRecord::Kind::kPadCrop, FlipAxis::kHorizontal, p->pad, {x, y}};
  }
  const auto& c = std::get<FixedCutoutStep>(step);
  const int x = rng.uniform_int(0, img.width() - 1);
  const int y = rng.uniform_int(0, img.height() - 1);
  return StepRecord{StepRecord::Kind::kFixedCutout, FlipAxis::kHorizontal, c.side, {x, y}};
}

// Applies the post steps, taking the normalization snapshot before a
// trailing fixed cutout and zeroing the cutout region in tensor space.
void finish_chain(ChainResult& result, const ChainConfig& chain,
                  const std::vector<StepRecord>& post) {
  const bool trailing =
      chain.normalization && !post.empty() && post.back().kind == StepRecord::Kind::kFixedCutout;
  const std::size_t plain = trailing ? post.size() - 1 : post.size();
  for (std::size_t i = 0; i < plain; ++i) {
    result.image = apply_step_record(result.image, post[i], chain.fill);
  }
  if (!chain.normalization) return;
  result.tensor = normalize(result.image, *chain.normalization);
  if (!trailing) return;
  const StepRecord& cut = post.back();
  result.image = apply_step_record(result.image, cut, chain.fill);
  const Rect r = cutout_rect(result.image.width(), result.image.height(), cut.size, cut.point);
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) {
      for (int c = 0; c < 3; ++c) {
        result.tensor->data[(static_cast<std::size_t>(y) * result.tensor->width + x) * 3 + c] = 0.0f;
      }
    }
  }
}

}  // namespace

ChainResult run_chain(const Image& img, const ChainConfig& chain, RngState& rng,
                      const PartnerPool* pool) {
  ChainResult result{img, std::nullopt, {}};
  for (const auto& step : chain.pre_ops) {
    if (auto s = draw_step(step, result.image, rng)) {
      result.image = apply_step_record(result.image, *s, chain.fill);
      result.record.pre.push_back(*s);
    }
  }
  if (chain.policy) {
    auto [out, rec] = policy_transform(result.image, *chain.policy, rng, pool);
    result.image = std::move(out);
    result.record.policy = std::move(rec);
  }
  // Post draws happen before any post step is applied; none of them depends
  // on pixel values, only on the (unchanged) dimensions.
  for (const auto& step : chain.post_ops) {
    if (auto s = draw_step(step, result.image, rng)) result.record.post.push_back(*s);
  }
  finish_chain(result, chain, result.record.post);
  return result;
}

ChainResult replay_chain(const Image& img, const ChainConfig& chain, const ChainRecord& record,
                         const PartnerLookup& partners) {
  ChainResult result{img, std::nullopt, record};
  for (const auto& s : record.pre) result.image = apply_step_record(result.image, s, chain.fill);
  if (!record.policy.ops.empty()) {
    if (!chain.policy) throw ConfigError("record has policy ops but the chain has no policy");
    result.image = replay_record(result.image, record.policy, chain.policy->space, partners);
  }
  finish_chain(result, chain, record.post);
  return result;
}

namespace {

std::string output_name(std::uint64_t index, int replica) {
  return std::to_string(index) + "_" + std::to_string(replica) + ".png";
}

struct LoadedSet {
  std::vector<Image> images;
  std::vector<std::uint64_t> ids;
  std::vector<std::string> errors;
};

LoadedSet load_source(const DatasetSource& src) {
  LoadedSet set;
  ingest(src, [&set](Sample&& s) {
    if (s.ok()) {
      set.images.push_back(std::move(*s.image));
      set.ids.push_back(s.index);
    } else {
      set.errors.push_back("item " + std::to_string(s.index) + ": " + s.error);
    }
  });
  return set;
}

Json header_json(const DatasetSource& src, const ChainConfig& chain, const CorpusOptions& opts,
                 std::uint64_t images) {
  Json h;
  h["type"] = "header";
  h["version"] = 1;
  h["seed"] = opts.seed;
  h["replicas"] = opts.replicas;
  h["batch_size"] = opts.batch_size;
  h["source"] = {{"format", std::string(format_name(src.kind))},
                 {"path", src.path.string()},
                 {"images", images}};
  h["space"] = chain.policy ? Json(std::string(space_name(chain.policy->space.name())))
                            : Json(nullptr);
  h["policy"] = chain.policy ? policy_to_json(*chain.policy) : Json(nullptr);
  h["chain"] = chain_to_json(chain);
  return h;
}

}  // namespace

CorpusSummary augment_corpus(const DatasetSource& src, const ChainConfig& chain,
                             const fs::path& out_dir, const CorpusOptions& opts) {
  chain.validate();
  if (opts.replicas < 1) throw ConfigError("replicas must be >= 1");
  if (opts.workers < 1) throw ConfigError("workers must be >= 1");
  if (opts.batch_size < 1) throw ConfigError("batch size must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  const fs::path marker = out_dir / kIncompleteMarker;
  write_file(marker, {});

  LoadedSet set = load_source(src);
  const std::size_t n = set.images.size();
  const auto replicas = static_cast<std::size_t>(opts.replicas);
  const std::size_t jobs = n * replicas;
  std::vector<Json> records(jobs);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const std::size_t pos = job / replicas;
      const int replica = static_cast<int>(job % replicas);
      try {
        const std::size_t batch_start = pos - pos % static_cast<std::size_t>(opts.batch_size);
        const std::size_t batch_end =
            std::min(n, batch_start + static_cast<std::size_t>(opts.batch_size));
        PartnerPool pool{
            std::span<const Image>(set.images).subspan(batch_start, batch_end - batch_start),
            pos - batch_start, 0,
            std::span<const std::uint64_t>(set.ids).subspan(batch_start, batch_end - batch_start)};
        const std::uint64_t index = set.ids[pos];
        RngState rng = replica_rng(RngState(opts.seed, index), static_cast<std::uint64_t>(replica));
        ChainResult result = run_chain(set.images[pos], chain, rng, &pool);
        const std::string name = output_name(index, replica);
        write_file(out_dir / name, encode_png(result.image));
        Json rec;
        rec["type"] = "record";
        rec["source"] = index;
        rec["replica"] = replica;
        rec["file"] = name;
        rec["ops"] = chain_record_to_json(result.record);
        records[job] = std::move(rec);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };

  const int threads = std::max(1, std::min<int>(opts.workers, static_cast<int>(std::max<std::size_t>(jobs, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  std::ofstream manifest(out_dir / kManifestName, std::ios::binary | std::ios::trunc);
  if (!manifest) throw IoError("cannot write manifest in " + out_dir.string());
  manifest << header_json(src, chain, opts, n).dump() << '\n';
  for (const auto& rec : records) manifest << rec.dump() << '\n';
  manifest.close();
  if (!manifest) throw IoError("manifest write failed in " + out_dir.string());

  fs::remove(marker, ec);
  CorpusSummary summary;
  summary.images = n;
  summary.outputs = jobs;
  summary.ingest_errors = std::move(set.errors);
  summary.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

ReplaySummary replay_corpus(const fs::path& manifest_path, const std::optional<fs::path>& input,
                            const fs::path& out_dir) {
  ReplaySummary summary;
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest " + manifest_path.string());

  std::string line;
  std::optional<Json> header;
  std::vector<Json> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j = Json::parse(line);
    if (j.value("type", "") == "header") {
      header = std::move(j);
    } else {
      records.push_back(std::move(j));
    }
  }
  if (records.empty()) return summary;
  if (!header) throw ConfigError("manifest has records but no header line");

  const ChainConfig chain = chain_from_json(header->at("chain"));
  DatasetSource src;
  src.kind = parse_format(header->at("source").at("format").get<std::string>());
  src.path = input ? *input : fs::path(header->at("source").at("path").get<std::string>());
  LoadedSet set = load_source(src);
  std::map<std::uint64_t, const Image*> by_id;
  for (std::size_t i = 0; i < set.images.size(); ++i) by_id[set.ids[i]] = &set.images[i];
  const PartnerLookup lookup = [&by_id](std::uint64_t id) -> const Image* {
    const auto it = by_id.find(id);
    return it == by_id.end() ? nullptr : it->second;
  };

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  for (const auto& rec : records) {
    ++summary.records;
    const std::string file = rec.at("file").get<std::string>();
    try {
      const auto id = rec.at("source").get<std::uint64_t>();
      const Image* source = lookup(id);
      if (source == nullptr) throw ConfigError("source image " + std::to_string(id) + " not found");
      const ChainRecord record = chain_record_from_json(rec.at("ops"));
      const auto bytes = encode_png(replay_chain(*source, chain, record, lookup).image);
      const fs::path target = out_dir / file;
      if (fs::exists(target)) {
        if (read_file(target) == bytes) {
          ++summary.matched;
        } else {
          ++summary.mismatched;
          if (summary.first_mismatch.empty()) summary.first_mismatch = file;
        }
      } else {
        write_file(target, bytes);
        ++summary.written;
      }
    } catch (const std::exception& e) {
      ++summary.mismatched;
      if (summary.first_mismatch.empty()) summary.first_mismatch = file;
      summary.errors.push_back(file + ": " + e.what());
    }
  }
  return summary;
}

}  // namespace augkit
