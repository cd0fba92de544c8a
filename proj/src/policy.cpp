#include "augkit/policy.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>

namespace augkit {

namespace {

// Applies one op with its auxiliary draws and returns the record entry.
Image apply_and_record(const Image& img, OpKind op, int m, const PolicyConfig& cfg, RngState& rng,
                       const PartnerPool* pool, AugRecord& record) {
  AppliedOp entry;
  entry.op = op;
  entry.m = m;
  const OpDraws draws = draw_op_aux(op, cfg.space, img, rng);
  entry.sign = draws.sign;
  entry.center = draws.center;

  if (op == OpKind::kSamplePairing) {
    // Partners must match in size; none available degenerates to identity.
    std::vector<std::size_t> candidates;
    if (pool != nullptr) {
      for (std::size_t j = 0; j < pool->batch.size(); ++j) {
        if (j != pool->self && pool->batch[j].same_shape(img)) candidates.push_back(j);
      }
    }
    if (candidates.empty()) {
      record.ops.push_back(entry);
      return img;
    }
    const std::size_t pick = candidates[rng.uniform_index(candidates.size())];
    entry.partner = pool->id(pick);
    record.ops.push_back(entry);
    return apply_resolved(img, op, m, cfg.space, draws, &pool->batch[pick]);
  }

  record.ops.push_back(entry);
  return apply_resolved(img, op, m, cfg.space, draws);
}

}  // namespace

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kTA:
      return "ta";
    case PolicyKind::kRA:
      return "ra";
    case PolicyKind::kUA:
      return "ua";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "ta") return PolicyKind::kTA;
  if (key == "ra") return PolicyKind::kRA;
  if (key == "ua") return PolicyKind::kUA;
  throw ConfigError("unknown policy '" + std::string(name) + "'; valid: ta, ra, ua");
}

PolicyConfig PolicyConfig::ta(AugmentationSpace space) {
  PolicyConfig cfg;
  cfg.kind = PolicyKind::kTA;
  cfg.space = std::move(space);
  return cfg;
}

PolicyConfig PolicyConfig::ra(AugmentationSpace space, int n, int m) {
  PolicyConfig cfg;
  cfg.kind = PolicyKind::kRA;
  cfg.space = std::move(space);
  cfg.ra_n = n;
  cfg.ra_m = m;
  return cfg;
}

PolicyConfig PolicyConfig::ua(AugmentationSpace space) {
  PolicyConfig cfg;
  cfg.kind = PolicyKind::kUA;
  cfg.space = std::move(space);
  return cfg;
}

std::vector<OpKind> PolicyConfig::effective_ops() const {
  std::vector<OpKind> ops;
  for (const auto& s : space.ops()) {
    if (!op_subset || std::find(op_subset->begin(), op_subset->end(), s.kind) != op_subset->end()) {
      ops.push_back(s.kind);
    }
  }
  return ops;
}

std::vector<int> PolicyConfig::effective_strengths() const {
  std::vector<int> levels;
  for (int m : space.levels()) {
    if (!strength_subset ||
        std::find(strength_subset->begin(), strength_subset->end(), m) != strength_subset->end()) {
      levels.push_back(m);
    }
  }
  return levels;
}

void PolicyConfig::validate() const {
  if (strength_subset) {
    if (strength_subset->empty()) throw ConfigError("strength subset must not be empty");
    for (int m : *strength_subset) {
      if (!space.has_level(m)) {
        throw ConfigError("strength " + std::to_string(m) + " is not a level of space " +
                          std::string(space_name(space.name())));
      }
    }
  }
  if (op_subset) {
    for (OpKind op : *op_subset) {
      if (!space.contains(op)) {
        throw ConfigError("op " + std::string(op_name(op)) + " is not part of space " +
                          std::string(space_name(space.name())));
      }
    }
  }
  if (effective_ops().empty()) throw ConfigError("effective op set is empty");
  if (kind == PolicyKind::kRA) {
    if (ra_n < 1 || ra_n > 3) throw ConfigError("RA n must be in 1..3");
    if (ra_m < 0 || ra_m > kMaxStrength) throw ConfigError("RA m must be in 0..30");
    if (!space.has_level(ra_m)) {
      throw ConfigError("RA m=" + std::to_string(ra_m) + " is not a level of space " +
                        std::string(space_name(space.name())));
    }
  } else if (effective_strengths().empty()) {
    throw ConfigError("effective strength set is empty");
  }
}

Augmented ta_transform(const Image& img, const PolicyConfig& cfg, RngState& rng,
                       const PartnerPool* pool) {
  if (cfg.kind != PolicyKind::kTA) throw ConfigError("ta_transform needs a TA policy");
  cfg.validate();
  const auto ops = cfg.effective_ops();
  const auto levels = cfg.effective_strengths();
  const OpKind op = ops[rng.uniform_index(ops.size())];
  const int m = levels[rng.uniform_index(levels.size())];
  AugRecord record;
  Image out = apply_and_record(img, op, m, cfg, rng, pool, record);
  return {std::move(out), std::move(record)};
}

Augmented ra_transform(const Image& img, const PolicyConfig& cfg, RngState& rng,
                       const PartnerPool* pool) {
  if (cfg.kind != PolicyKind::kRA) throw ConfigError("ra_transform needs an RA policy");
  cfg.validate();
  const auto ops = cfg.effective_ops();
  AugRecord record;
  Image out = img;
  for (int i = 0; i < cfg.ra_n; ++i) {
    const OpKind op = ops[rng.uniform_index(ops.size())];
    out = apply_and_record(out, op, cfg.ra_m, cfg, rng, pool, record);
  }
  return {std::move(out), std::move(record)};
}

Augmented ua_transform(const Image& img, const PolicyConfig& cfg, RngState& rng,
                       const PartnerPool* pool) {
  if (cfg.kind != PolicyKind::kUA) throw ConfigError("ua_transform needs a UA policy");
  cfg.validate();
  const auto ops = cfg.effective_ops();
  const auto levels = cfg.effective_strengths();
  AugRecord record;
  Image out = img;
  for (int slot = 0; slot < kUniformAugmentSlots; ++slot) {
    const OpKind op = ops[rng.uniform_index(ops.size())];
    if (!rng.bernoulli(kUniformAugmentApplyProb)) continue;
    const int m = levels[rng.uniform_index(levels.size())];
    out = apply_and_record(out, op, m, cfg, rng, pool, record);
  }
  return {std::move(out), std::move(record)};
}

Augmented policy_transform(const Image& img, const PolicyConfig& cfg, RngState& rng,
                           const PartnerPool* pool) {
  switch (cfg.kind) {
    case PolicyKind::kTA:
      return ta_transform(img, cfg, rng, pool);
    case PolicyKind::kRA:
      return ra_transform(img, cfg, rng, pool);
    case PolicyKind::kUA:
      return ua_transform(img, cfg, rng, pool);
  }
  throw ConfigError("unhandled policy kind");
}

Image replay_record(const Image& img, const AugRecord& record, const AugmentationSpace& space,
                    const PartnerLookup& partners, Rgb fill) {
  Image out = img;
  for (const AppliedOp& a : record.ops) {
    const OpDraws draws{a.sign, a.center};
    if (a.op == OpKind::kSamplePairing) {
      map_strength(a.op, a.m, space, a.sign);  // validates m
      if (!a.partner) continue;
      const Image* partner = partners ? partners(*a.partner) : nullptr;
      if (partner == nullptr) {
        throw ConfigError("partner image " + std::to_string(*a.partner) + " unavailable");
      }
      out = apply_resolved(out, a.op, a.m, space, draws, partner, fill);
      continue;
    }
    out = apply_resolved(out, a.op, a.m, space, draws, nullptr, fill);
  }
  return out;
}

std::vector<OpKind> sample_op_subset(const AugmentationSpace& space, int k, RngState& rng) {
  const auto n = static_cast<int>(space.ops().size());
  if (k < 1 || k > n) {
    throw ConfigError("subset size must be in 1.." + std::to_string(n) + ", got " +
                      std::to_string(k));
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<OpKind> subset;
  subset.reserve(k);
  for (int i : idx) subset.push_back(space.ops()[i].kind);
  return subset;
}

RngState replica_rng(const RngState& rng, std::uint64_t replica) {
  return {rng.seed(), derive_stream(rng.seed(), rng.stream(), replica)};
}

std::vector<Augmented> batch_augment(const Image& img, const PolicyConfig& cfg,
                                     const RngState& rng, int replicas, const PartnerPool* pool) {
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  std::vector<Augmented> out;
  out.reserve(replicas);
  for (int r = 0; r < replicas; ++r) {
    RngState stream = replica_rng(rng, static_cast<std::uint64_t>(r));
    out.push_back(policy_transform(img, cfg, stream, pool));
  }
  return out;
}

}  // namespace augkit
