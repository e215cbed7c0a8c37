#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "motedit/features.hpp"
#include "motedit/skeleton.hpp"

namespace motedit {

// The 8-part body lexicon used for masked editing.
enum class BodyPart {
  kLeftArm,
  kRightArm,
  kLeftLeg,
  kRightLeg,
  kButtocks,
  kWaist,
  kTorso,
  kNeck,
};

inline constexpr int kNumBodyParts = 8;

std::string to_string(BodyPart p);
BodyPart body_part_from_string(const std::string& name);  // InvalidLexiconError

enum class BodyPartProvenance { kCachedLlm, kLexiconRule };

struct BodyPartSet {
  std::set<BodyPart> parts;
  BodyPartProvenance provenance = BodyPartProvenance::kLexiconRule;
};

// File-backed LLM response cache: one record per edit text, tab-separated
// from a comma-separated part list.
class BodyPartCache {
 public:
  static BodyPartCache load(const std::string& path);
  static BodyPartCache from_string(const std::string& content,
                                   const std::string& origin = "<memory>");

  std::optional<std::set<BodyPart>> lookup(const std::string& text) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, std::set<BodyPart>>> entries_;
};

// Cache hit returns the cached list verbatim; miss falls back to keyword
// rules over the edit text. Non-empty text always yields at least one part.
BodyPartSet body_parts_for_edit(const std::string& text,
                                const BodyPartCache* cache = nullptr);

// Editable feature dimensions for a part selection: each part owns the 6D
// rotation and position dims of its joints; root dims [0,15) belong to
// buttocks and waist.
std::vector<bool> part_mask(const std::set<BodyPart>& parts,
                            const Skeleton& skeleton);

const std::vector<int>& joints_of_part(BodyPart p);

std::set<BodyPart> all_body_parts();

}  // namespace motedit
