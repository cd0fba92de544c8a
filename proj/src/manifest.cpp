#include "augkit/manifest.hpp"

#include <string>

namespace augkit {

namespace {

Json point_json(Point p) { return Json::array({p.x, p.y}); }

Point point_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected [x, y] point");
  return {j.at(0).get<int>(), j.at(1).get<int>()};
}

std::string_view axis_op_name(FlipAxis axis) {
  return axis == FlipAxis::kHorizontal ? "flip_lr" : "flip_ud";
}

FlipAxis parse_axis(std::string_view name) {
  if (name == "flip_lr" || name == "horizontal") return FlipAxis::kHorizontal;
  if (name == "flip_ud" || name == "vertical") return FlipAxis::kVertical;
  throw ConfigError("unknown mirror axis '" + std::string(name) + "'");
}

Json applied_op_json(const AppliedOp& a) {
  Json j;
  j["name"] = std::string(op_name(a.op));
  j["stage"] = "policy";
  j["m"] = a.m;
  j["sign"] = a.sign;
  if (a.center) j["center"] = point_json(*a.center);
  if (a.partner) j["partner"] = *a.partner;
  return j;
}

AppliedOp applied_op_from(const Json& j) {
  AppliedOp a;
  const auto name = j.at("name").get<std::string>();
  const auto op = parse_op(name);
  if (!op) throw ConfigError("unknown op '" + name + "' in record");
  a.op = *op;
  a.m = j.at("m").get<int>();
  a.sign = j.value("sign", 1);
  if (j.contains("center")) a.center = point_from(j.at("center"));
  if (j.contains("partner")) a.partner = j.at("partner").get<std::uint64_t>();
  return a;
}

Json step_record_json(const StepRecord& s, const char* stage) {
  Json j;
  switch (s.kind) {
    case StepRecord::Kind::kMirror:
      j["name"] = std::string(axis_op_name(s.axis));
      j["stage"] = stage;
      break;
    case StepRecord::Kind::kPadCrop:
      j["name"] = "pad_and_crop";
      j["stage"] = stage;
      j["pad"] = s.size;
      j["origin"] = point_json(s.point);
      break;
    case StepRecord::Kind::kFixedCutout:
      j["name"] = "cutout";
      j["stage"] = stage;
      j["side"] = s.size;
      j["center"] = point_json(s.point);
      break;
  }
  return j;
}

StepRecord step_record_from(const Json& j) {
  StepRecord s;
  const auto name = j.at("name").get<std::string>();
  if (name == "flip_lr" || name == "flip_ud") {
    s.kind = StepRecord::Kind::kMirror;
    s.axis = parse_axis(name);
  } else if (name == "pad_and_crop") {
    s.kind = StepRecord::Kind::kPadCrop;
    s.size = j.at("pad").get<int>();
    s.point = point_from(j.at("origin"));
  } else if (name == "cutout") {
    s.kind = StepRecord::Kind::kFixedCutout;
    s.size = j.at("side").get<int>();
    s.point = point_from(j.at("center"));
  } else {
    throw ConfigError("unknown chain step '" + name + "' in record");
  }
  return s;
}

Json step_json(const ChainStep& step) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        Json j;
        if constexpr (std::is_same_v<T, MirrorStep>) {
          j["step"] = "mirror";
          j["axis"] = s.axis == FlipAxis::kHorizontal ? "horizontal" : "vertical";
          j["prob"] = s.prob;
        } else if constexpr (std::is_same_v<T, PadCropStep>) {
          j["step"] = "pad_and_crop";
          j["pad"] = s.pad;
        } else {
          j["step"] = "cutout";
          j["side"] = s.side;
        }
        return j;
      },
      step);
}

ChainStep step_from(const Json& j) {
  const auto kind = j.at("step").get<std::string>();
  if (kind == "mirror") {
    return MirrorStep{parse_axis(j.at("axis").get<std::string>()), j.at("prob").get<double>()};
  }
  if (kind == "pad_and_crop") return PadCropStep{j.at("pad").get<int>()};
  if (kind == "cutout") return FixedCutoutStep{j.at("side").get<int>()};
  throw ConfigError("unknown chain step '" + kind + "'");
}

}  // namespace

Json space_to_json(const AugmentationSpace& space) {
  Json j;
  j["name"] = std::string(space_name(space.name()));
  Json ops = Json::array();
  for (const auto& s : space.ops()) {
    Json op;
    op["name"] = std::string(op_name(s.kind));
    if (s.range.parameterless) {
      op["range"] = nullptr;
    } else {
      op["range"] = Json::array({s.range.low, s.range.high});
      op["signed"] = s.range.is_signed;
    }
    ops.push_back(std::move(op));
  }
  j["ops"] = std::move(ops);
  j["levels"] = space.levels();
  return j;
}

Json policy_to_json(const PolicyConfig& cfg) {
  Json j;
  j["kind"] = std::string(policy_name(cfg.kind));
  j["space"] = std::string(space_name(cfg.space.name()));
  if (cfg.kind == PolicyKind::kRA) {
    j["n"] = cfg.ra_n;
    j["m"] = cfg.ra_m;
  }
  if (cfg.strength_subset) j["strengths"] = *cfg.strength_subset;
  if (cfg.op_subset) {
    Json ops = Json::array();
    for (OpKind op : *cfg.op_subset) ops.push_back(std::string(op_name(op)));
    j["ops"] = std::move(ops);
  }
  return j;
}

PolicyConfig policy_from_json(const Json& j) {
  PolicyConfig cfg;
  cfg.kind = parse_policy(j.at("kind").get<std::string>());
  cfg.space = build_space(j.at("space").get<std::string>());
  if (cfg.kind == PolicyKind::kRA) {
    cfg.ra_n = j.at("n").get<int>();
    cfg.ra_m = j.at("m").get<int>();
  }
  if (j.contains("strengths")) cfg.strength_subset = j.at("strengths").get<std::vector<int>>();
  if (j.contains("ops")) {
    std::vector<OpKind> ops;
    for (const auto& name : j.at("ops")) {
      const auto op = parse_op(name.get<std::string>());
      if (!op) throw ConfigError("unknown op '" + name.get<std::string>() + "'");
      ops.push_back(*op);
    }
    cfg.op_subset = std::move(ops);
  }
  cfg.validate();
  return cfg;
}

Json chain_to_json(const ChainConfig& chain) {
  Json j;
  Json pre = Json::array();
  for (const auto& s : chain.pre_ops) pre.push_back(step_json(s));
  j["pre"] = std::move(pre);
  j["policy"] = chain.policy ? policy_to_json(*chain.policy) : Json(nullptr);
  Json post = Json::array();
  for (const auto& s : chain.post_ops) post.push_back(step_json(s));
  j["post"] = std::move(post);
  if (chain.normalization) {
    j["normalization"] = {{"mean", chain.normalization->mean}, {"std", chain.normalization->std}};
  } else {
    j["normalization"] = nullptr;
  }
  j["fill"] = Json::array({chain.fill.r, chain.fill.g, chain.fill.b});
  return j;
}

ChainConfig chain_from_json(const Json& j) {
  ChainConfig chain;
  for (const auto& s : j.at("pre")) chain.pre_ops.push_back(step_from(s));
  if (!j.at("policy").is_null()) chain.policy = policy_from_json(j.at("policy"));
  for (const auto& s : j.at("post")) chain.post_ops.push_back(step_from(s));
  if (j.contains("normalization") && !j.at("normalization").is_null()) {
    Normalization n;
    n.mean = j.at("normalization").at("mean").get<std::array<double, 3>>();
    n.std = j.at("normalization").at("std").get<std::array<double, 3>>();
    chain.normalization = n;
  }
  if (j.contains("fill")) {
    const auto f = j.at("fill").get<std::array<int, 3>>();
    chain.fill = Rgb{static_cast<std::uint8_t>(f[0]), static_cast<std::uint8_t>(f[1]),
                     static_cast<std::uint8_t>(f[2])};
  }
  chain.validate();
  return chain;
}

Json aug_record_to_json(const AugRecord& record) {
  Json ops = Json::array();
  for (const auto& a : record.ops) ops.push_back(applied_op_json(a));
  return ops;
}

AugRecord aug_record_from_json(const Json& ops) {
  AugRecord r;
  for (const auto& j : ops) r.ops.push_back(applied_op_from(j));
  return r;
}

Json chain_record_to_json(const ChainRecord& record) {
  Json ops = Json::array();
  for (const auto& s : record.pre) ops.push_back(step_record_json(s, "pre"));
  for (const auto& a : record.policy.ops) ops.push_back(applied_op_json(a));
  for (const auto& s : record.post) ops.push_back(step_record_json(s, "post"));
  return ops;
}

ChainRecord chain_record_from_json(const Json& ops) {
  ChainRecord r;
  for (const auto& j : ops) {
    const auto stage = j.at("stage").get<std::string>();
    if (stage == "pre") {
      r.pre.push_back(step_record_from(j));
    } else if (stage == "policy") {
      r.policy.ops.push_back(applied_op_from(j));
    } else if (stage == "post") {
      r.post.push_back(step_record_from(j));
    } else {
      throw ConfigError("unknown record stage '" + stage + "'");
    }
  }
  return r;
}

}  // namespace augkit
