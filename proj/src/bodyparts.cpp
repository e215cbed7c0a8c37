#include "motedit/bodyparts.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "motedit/text_encoder.hpp"

namespace motedit {

std::string to_string(BodyPart p) {
  switch (p) {
    case BodyPart::kLeftArm: return "left arm";
    case BodyPart::kRightArm: return "right arm";
    case BodyPart::kLeftLeg: return "left leg";
    case BodyPart::kRightLeg: return "right leg";
    case BodyPart::kButtocks: return "buttocks";
    case BodyPart::kWaist: return "waist";
    case BodyPart::kTorso: return "torso";
    case BodyPart::kNeck: return "neck";
  }
  throw InvalidLexiconError("unknown body part value");
}

BodyPart body_part_from_string(const std::string& name) {
  // Tolerate surrounding whitespace.
  std::string s = name;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
  static const std::map<std::string, BodyPart> table = {
      {"left arm", BodyPart::kLeftArm},   {"right arm", BodyPart::kRightArm},
      {"left leg", BodyPart::kLeftLeg},   {"right leg", BodyPart::kRightLeg},
      {"buttocks", BodyPart::kButtocks},  {"waist", BodyPart::kWaist},
      {"torso", BodyPart::kTorso},        {"neck", BodyPart::kNeck}};
  const auto it = table.find(s);
  if (it == table.end()) {
    throw InvalidLexiconError("unknown body part name '" + s + "'");
  }
  return it->second;
}

std::set<BodyPart> all_body_parts() {
  return {BodyPart::kLeftArm, BodyPart::kRightArm, BodyPart::kLeftLeg,
          BodyPart::kRightLeg, BodyPart::kButtocks, BodyPart::kWaist,
          BodyPart::kTorso,   BodyPart::kNeck};
}

BodyPartCache BodyPartCache::from_string(const std::string& content,
                                         const std::string& origin) {
  BodyPartCache cache;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("body-part cache " + origin + ":" + std::to_string(lineno) +
                       ": expected <text>\\t<part,part,...>");
    }
    const std::string text = line.substr(0, tab);
    const std::string list = line.substr(tab + 1);
    std::set<BodyPart> parts;
    std::string item;
    std::istringstream ls(list);
    while (std::getline(ls, item, ',')) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      try {
        parts.insert(body_part_from_string(item));
      } catch (const InvalidLexiconError& e) {
        throw ParseError("body-part cache " + origin + ":" + std::to_string(lineno) +
                         ": " + e.what());
      }
    }
    if (parts.empty()) {
      throw ParseError("body-part cache " + origin + ":" + std::to_string(lineno) +
                       ": empty part list");
    }
    cache.entries_.emplace_back(text, std::move(parts));
  }
  return cache;
}

BodyPartCache BodyPartCache::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("body-part cache: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path);
}

std::optional<std::set<BodyPart>> BodyPartCache::lookup(const std::string& text) const {
  for (const auto& [key, parts] : entries_) {
    if (key == text) return parts;
  }
  return std::nullopt;
}

namespace {

bool has_any(const std::vector<std::string>& words,
             std::initializer_list<const char*> keys) {
  for (const std::string& w : words) {
    for (const char* k : keys) {
      if (w == k) return true;
    }
  }
  return false;
}

}  // namespace

BodyPartSet body_parts_for_edit(const std::string& text, const BodyPartCache* cache) {
  if (cache != nullptr) {
    if (auto hit = cache->lookup(text)) {
      return {std::move(*hit), BodyPartProvenance::kCachedLlm};
    }
  }
  BodyPartSet out;
  out.provenance = BodyPartProvenance::kLexiconRule;
  if (text.empty()) return out;

  const std::vector<std::string> words = HashedTextEncoder::tokenize(text);
  const bool left = has_any(words, {"left"});
  const bool right = has_any(words, {"right"});

  const bool arms = has_any(words, {"arm", "arms", "hand", "hands", "wrist",
                                    "wrists", "elbow", "elbows", "shoulder",
                                    "shoulders", "wave", "waving", "punch",
                                    "clap", "throw", "reach", "raise", "swing"});
  const bool legs = has_any(words, {"leg", "legs", "step", "steps", "walk",
                                    "walking", "jump", "jumping", "run",
                                    "running", "kick", "knee", "knees", "foot",
                                    "feet", "squat", "sit", "stand", "crouch",
                                    "kneel", "stride", "hop", "backwards"});
  const bool locomotion = has_any(words, {"turn", "turning", "rotate", "spin",
                                          "faster", "slower", "speed", "quicker",
                                          "direction", "around", "circle", "way"});
  const bool torso = has_any(words, {"torso", "back", "chest", "lean", "bend",
                                     "bending", "tilt", "straight", "bow",
                                     "twist", "waist", "hips", "down", "deeper",
                                     "lower"});
  const bool neck = has_any(words, {"head", "neck", "look", "nod"});
  const bool whole = has_any(words, {"mirror", "body", "whole", "everything",
                                     "entire", "all", "opposite", "side",
                                     "motion"});

  auto add_sided = [&](BodyPart l, BodyPart r) {
    if (left && !right) {
      out.parts.insert(l);
    } else if (right && !left) {
      out.parts.insert(r);
    } else {
      out.parts.insert(l);
      out.parts.insert(r);
    }
  };

  if (whole) {
    out.parts = all_body_parts();
    return out;
  }
  if (arms) add_sided(BodyPart::kLeftArm, BodyPart::kRightArm);
  if (legs || locomotion) {
    add_sided(BodyPart::kLeftLeg, BodyPart::kRightLeg);
    out.parts.insert(BodyPart::kButtocks);
  }
  if (torso) {
    out.parts.insert(BodyPart::kTorso);
    out.parts.insert(BodyPart::kWaist);
  }
  if (neck) out.parts.insert(BodyPart::kNeck);

  if (out.parts.empty()) out.parts = all_body_parts();  // fallback guarantee
  return out;
}

const std::vector<int>& joints_of_part(BodyPart p) {
  static const std::map<BodyPart, std::vector<int>> table = {
      {BodyPart::kLeftArm, {kLeftCollar, kLeftShoulder, kLeftElbow, kLeftWrist}},
      {BodyPart::kRightArm, {kRightCollar, kRightShoulder, kRightElbow, kRightWrist}},
      {BodyPart::kLeftLeg, {kLeftHip, kLeftKnee, kLeftAnkle, kLeftFoot}},
      {BodyPart::kRightLeg, {kRightHip, kRightKnee, kRightAnkle, kRightFoot}},
      {BodyPart::kButtocks, {kPelvis}},
      {BodyPart::kWaist, {kSpine1, kSpine2}},
      {BodyPart::kTorso, {kSpine3}},
      {BodyPart::kNeck, {kNeck, kHead}}};
  return table.at(p);
}

std::vector<bool> part_mask(const std::set<BodyPart>& parts, const Skeleton& skeleton) {
  (void)skeleton;  // the joint table is frozen to the default joint order
  std::vector<bool> mask(kFeatureDim, false);
  const bool root = parts.count(BodyPart::kButtocks) > 0 ||
                    parts.count(BodyPart::kWaist) > 0;
  if (root) {
    for (int d = 0; d < kBodyPoseOffset; ++d) mask[d] = true;
  }
  for (BodyPart p : parts) {
    for (int j : joints_of_part(p)) {
      if (j != kPelvis) {
        const int rot = kBodyPoseOffset + 6 * (j - 1);
        for (int d = 0; d < 6; ++d) mask[rot + d] = true;
      }
      const int pos = kJointPosOffset + 3 * j;
      for (int d = 0; d < 3; ++d) mask[pos + d] = true;
    }
  }
  return mask;
}

}  // namespace motedit
