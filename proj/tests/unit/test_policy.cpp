#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "augkit/policy.hpp"
#include "augkit/stats.hpp"
#include "helpers.hpp"

using namespace augkit;

namespace {

RngState stream_for(std::uint64_t seed, std::uint64_t i) { return {seed, derive_stream(seed, i, 0)}; }

std::size_t position(const std::vector<OpKind>& ops, OpKind op) {
  return static_cast<std::size_t>(std::find(ops.begin(), ops.end(), op) - ops.begin());
}

}  // namespace

TEST_CASE("policy names") {
  CHECK(parse_policy("TA") == PolicyKind::kTA);
  CHECK(parse_policy("ra") == PolicyKind::kRA);
  CHECK(policy_name(PolicyKind::kUA) == "ua");
  CHECK_THROWS_AS(parse_policy("aa"), ConfigError);
}

TEST_CASE("TA applies exactly one op with a uniform strength") {
  const auto cfg = PolicyConfig::ta(build_space(SpaceName::kRA));
  const Image img = testutil::noise(16, 16, 1);
  std::vector<std::uint64_t> op_counts(14, 0), m_counts(31, 0);
  for (std::uint64_t i = 0; i < 31000; ++i) {
    RngState rng = stream_for(3, i);
    const auto [out, rec] = ta_transform(img, cfg, rng);
    REQUIRE(rec.ops.size() == 1);
    ++op_counts[position(cfg.effective_ops(), rec.ops[0].op)];
    ++m_counts[static_cast<std::size_t>(rec.ops[0].m)];
    CHECK(out.width() == 16);
  }
  CHECK(stats::uniformity_test(op_counts).p_value > 0.001);
  CHECK(stats::uniformity_test(m_counts).p_value > 0.001);
}

TEST_CASE("TA strength subsets are respected") {
  const Image img = testutil::noise(8, 8, 2);
  for (const std::vector<int>& subset : {std::vector<int>{30}, {0, 30}, {0, 15, 30}}) {
    auto cfg = PolicyConfig::ta(build_space(SpaceName::kRA));
    cfg.strength_subset = subset;
    std::set<int> seen;
    for (std::uint64_t i = 0; i < 3000; ++i) {
      RngState rng = stream_for(4, i);
      seen.insert(ta_transform(img, cfg, rng).second.ops[0].m);
    }
    CHECK(seen == std::set<int>(subset.begin(), subset.end()));
  }
}

TEST_CASE("op subsets restrict the drawn ops") {
  auto cfg = PolicyConfig::ta(build_space(SpaceName::kAA));
  cfg.op_subset = std::vector<OpKind>{OpKind::kInvert, OpKind::kRotate};
  CHECK(cfg.effective_ops() == std::vector<OpKind>{OpKind::kRotate, OpKind::kInvert});
  const Image img = testutil::noise(8, 8, 3);
  std::set<OpKind> seen;
  for (std::uint64_t i = 0; i < 500; ++i) {
    RngState rng = stream_for(5, i);
    seen.insert(ta_transform(img, cfg, rng).second.ops[0].op);
  }
  CHECK(seen == std::set<OpKind>{OpKind::kRotate, OpKind::kInvert});
}

TEST_CASE("config validation") {
  auto cfg = PolicyConfig::ta(build_space(SpaceName::kOHL));
  cfg.strength_subset = std::vector<int>{7};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.strength_subset = std::vector<int>{};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.strength_subset.reset();
  cfg.op_subset = std::vector<OpKind>{OpKind::kSamplePairing};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(PolicyConfig::ra(build_space(SpaceName::kRA), 4, 9).validate(), ConfigError);
  CHECK_THROWS_AS(PolicyConfig::ra(build_space(SpaceName::kRA), 2, 31).validate(), ConfigError);
  CHECK_THROWS_AS(PolicyConfig::ra(build_space(SpaceName::kOHL), 2, 9).validate(), ConfigError);
  const Image img(4, 4);
  RngState rng(1, 1);
  CHECK_THROWS_AS(ra_transform(img, PolicyConfig::ta(build_space(SpaceName::kRA)), rng), ConfigError);
}

TEST_CASE("RA chains N ops at fixed m, drawn with replacement") {
  const auto cfg = PolicyConfig::ra(build_space(SpaceName::kRA), 3, 17);
  const Image img = testutil::noise(8, 8, 4);
  std::vector<std::uint64_t> counts(14, 0);
  bool repeated = false;
  for (std::uint64_t i = 0; i < 14000; ++i) {
    RngState rng = stream_for(6, i);
    const auto rec = ra_transform(img, cfg, rng).second;
    REQUIRE(rec.ops.size() == 3);
    for (const auto& a : rec.ops) {
      CHECK(a.m == 17);
      ++counts[position(cfg.effective_ops(), a.op)];
    }
    repeated |= rec.ops[0].op == rec.ops[1].op;
  }
  CHECK(repeated);
  CHECK(stats::uniformity_test(counts).p_value > 0.001);
}

TEST_CASE("UA applies each of two slots with probability one half") {
  const auto cfg = PolicyConfig::ua(build_space(SpaceName::kUA));
  const Image img = testutil::noise(8, 8, 5);
  std::map<std::size_t, int> lengths;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    RngState rng = stream_for(7, static_cast<std::uint64_t>(i));
    ++lengths[ua_transform(img, cfg, rng).second.ops.size()];
  }
  CHECK(lengths.size() == 3);
  CHECK(lengths[0] / double(n) == doctest::Approx(0.25).epsilon(0.05));
  CHECK(lengths[1] / double(n) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(lengths[2] / double(n) == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("records replay to identical images") {
  std::vector<Image> batch;
  for (int i = 0; i < 5; ++i) batch.push_back(testutil::noise(20, 20, 100 + i));
  const PartnerLookup lookup = [&](std::uint64_t id) -> const Image* {
    return id >= 50 && id < 55 ? &batch[id - 50] : nullptr;
  };
  for (const auto& cfg : {PolicyConfig::ta(build_space(SpaceName::kFull)),
                          PolicyConfig::ra(build_space(SpaceName::kAA), 2, 30),
                          PolicyConfig::ua(build_space(SpaceName::kUA)),
                          PolicyConfig::ta(build_space(SpaceName::kWide))}) {
    for (std::uint64_t i = 0; i < 300; ++i) {
      const std::size_t self = i % batch.size();
      const PartnerPool pool{batch, self, 50, {}};
      RngState rng = stream_for(8, i);
      const auto [out, rec] = policy_transform(batch[self], cfg, rng, &pool);
      for (const auto& a : rec.ops) {
        if (a.partner) CHECK(*a.partner != 50 + self);
      }
      CHECK(replay_record(batch[self], rec, cfg.space, lookup) == out);
    }
  }
}

TEST_CASE("sample pairing without a usable partner is the identity") {
  auto cfg = PolicyConfig::ta(build_space(SpaceName::kAA));
  cfg.op_subset = std::vector<OpKind>{OpKind::kSamplePairing};
  cfg.strength_subset = std::vector<int>{30};
  const Image img = testutil::noise(8, 8, 6);
  RngState rng(1, 1);
  auto [out, rec] = ta_transform(img, cfg, rng);
  CHECK(out == img);
  CHECK_FALSE(rec.ops[0].partner.has_value());

  const std::vector<Image> mixed{img, testutil::noise(9, 8, 7)};
  const PartnerPool pool{mixed, 0, 0, {}};
  auto [out2, rec2] = ta_transform(img, cfg, rng, &pool);
  CHECK(out2 == img);
  CHECK_FALSE(rec2.ops[0].partner.has_value());

  const std::vector<Image> ok{img, testutil::noise(8, 8, 8)};
  const PartnerPool pool2{ok, 0, 0, {}};
  auto [out3, rec3] = ta_transform(img, cfg, rng, &pool2);
  CHECK(rec3.ops[0].partner == 1u);
  CHECK(out3 == blend_pair(img, ok[1], 0.4));
}

TEST_CASE("replay rejects a missing partner") {
  AugRecord rec;
  rec.ops.push_back({OpKind::kSamplePairing, 10, 1, {}, 9});
  CHECK_THROWS_AS(replay_record(Image(4, 4), rec, build_space(SpaceName::kAA)), ConfigError);
}

TEST_CASE("op subset sampling") {
  const auto space = build_space(SpaceName::kRA);
  RngState rng(9, 9);
  for (int k : {1, 4, 8, 14}) {
    const auto s = sample_op_subset(space, k, rng);
    CHECK(s.size() == static_cast<std::size_t>(k));
    CHECK(std::set<OpKind>(s.begin(), s.end()).size() == s.size());
    CHECK(std::is_sorted(s.begin(), s.end(), [&](OpKind a, OpKind b) {
      return position(space.op_kinds(), a) < position(space.op_kinds(), b);
    }));
  }
  CHECK_THROWS_AS(sample_op_subset(space, 0, rng), ConfigError);
  CHECK_THROWS_AS(sample_op_subset(space, 15, rng), ConfigError);
}

TEST_CASE("batch augment gives independent, reproducible replicas") {
  const auto cfg = PolicyConfig::ta(build_space(SpaceName::kRA));
  const Image img = testutil::noise(12, 12, 10);
  const RngState rng(11, 3);
  const auto a = batch_augment(img, cfg, rng);
  const auto b = batch_augment(img, cfg, rng);
  REQUIRE(a.size() == static_cast<std::size_t>(kDefaultReplicas));
  std::set<std::pair<int, int>> distinct;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].first == b[i].first);
    CHECK(a[i].second == b[i].second);
    distinct.insert({static_cast<int>(a[i].second.ops[0].op), a[i].second.ops[0].m});
  }
  CHECK(distinct.size() > 1);
  CHECK_THROWS_AS(batch_augment(img, cfg, rng, 0), ConfigError);
}
