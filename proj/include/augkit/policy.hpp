#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "augkit/image.hpp"
#include "augkit/rng.hpp"
#include "augkit/space.hpp"

namespace augkit {

enum class PolicyKind { kTA, kRA, kUA };

std::string_view policy_name(PolicyKind kind);
PolicyKind parse_policy(std::string_view name);

inline constexpr int kUniformAugmentSlots = 2;
inline constexpr double kUniformAugmentApplyProb = 0.5;
inline constexpr int kDefaultReplicas = 8;

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kTA;
  AugmentationSpace space = build_space(SpaceName::kRA);
  int ra_n = 2;
  int ra_m = 9;
  std::optional<std::vector<int>> strength_subset;
  std::optional<std::vector<OpKind>> op_subset;

  static PolicyConfig ta(AugmentationSpace space);
  static PolicyConfig ra(AugmentationSpace space, int n, int m);
  static PolicyConfig ua(AugmentationSpace space);

  /// Throws ConfigError when a documented invariant does not hold, including
  /// an empty effective op or strength set.
  void validate() const;

  /// Space ops intersected with op_subset, in space order.
  std::vector<OpKind> effective_ops() const;
  /// Space levels intersected with strength_subset, ascending.
  std::vector<int> effective_strengths() const;
};

struct AppliedOp {
  OpKind op = OpKind::kIdentity;
  int m = 0;
  int sign = 1;
  std::optional<Point> center;
  std::optional<std::uint64_t> partner;

  friend bool operator==(const AppliedOp&, const AppliedOp&) = default;
};

/// The draws of one policy application; replaying it reproduces the image.
struct AugRecord {
  std::vector<AppliedOp> ops;

  friend bool operator==(const AugRecord&, const AugRecord&) = default;
};

/// Candidate sample_pairing partners: the current batch and the position of
/// the image being augmented. Records store `ids[j]` for batch position j, or
/// `base_index + j` when no ids are given.
struct PartnerPool {
  std::span<const Image> batch;
  std::size_t self = 0;
  std::uint64_t base_index = 0;
  std::span<const std::uint64_t> ids;

  std::uint64_t id(std::size_t j) const { return ids.empty() ? base_index + j : ids[j]; }
};

/// Resolves a recorded partner index to an image during replay.
using PartnerLookup = std::function<const Image*(std::uint64_t)>;

using Augmented = std::pair<Image, AugRecord>;

Augmented ta_transform(const Image& img, const PolicyConfig& cfg, RngState& rng,
                       const PartnerPool* pool = nullptr);
Augmented ra_transform(const Image& img, const PolicyConfig& cfg, RngState& rng,
                       const PartnerPool* pool = nullptr);
Augmented ua_transform(const Image& img, const PolicyConfig& cfg, RngState& rng,
                       const PartnerPool* pool = nullptr);
/// Dispatch on cfg.kind.
Augmented policy_transform(const Image& img, const PolicyConfig& cfg, RngState& rng,
                           const PartnerPool* pool = nullptr);

/// Re-apply the recorded draws; uses no randomness.
Image replay_record(const Image& img, const AugRecord& record, const AugmentationSpace& space,
                    const PartnerLookup& partners = {}, Rgb fill = kMidGray);

/// Uniform k-subset of the space's ops, returned in space order.
std::vector<OpKind> sample_op_subset(const AugmentationSpace& space, int k, RngState& rng);

/// Stream used for replica r of the image whose stream is `rng`.
RngState replica_rng(const RngState& rng, std::uint64_t replica);

std::vector<Augmented> batch_augment(const Image& img, const PolicyConfig& cfg,
                                     const RngState& rng, int replicas = kDefaultReplicas,
                                     const PartnerPool* pool = nullptr);

}  // namespace augkit
