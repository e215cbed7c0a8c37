#pragma once

#include <array>
#include <string>
#include <vector>

#include "motedit/io.hpp"
#include "motedit/motion.hpp"

namespace motedit {

enum class Split { kTrain, kVal, kTest };
enum class Provenance { kMined, kSynthetic };

std::string to_string(Split s);
std::string to_string(Provenance p);
Split split_from_string(const std::string& s);
Provenance provenance_from_string(const std::string& s);

// One supervised editing example. Both motions are canonical and pair-aligned
// (frame 0 at the origin, zero heading).
struct EditTriplet {
  std::string id;
  Motion source;
  Motion target;
  std::string edit_text;
  Split split = Split::kTrain;
  Provenance provenance = Provenance::kSynthetic;
  // Per-motion description texts used to train the retrieval embedder.
  std::string source_desc;
  std::string target_desc;

  void validate() const;
};

// Seeded shuffle, then contiguous assignment with floor-of-cumulative-ratio
// boundaries. Ratios must sum to 1.
std::vector<Split> split_dataset(std::size_t count,
                                 const std::array<double, 3>& ratios,
                                 std::uint64_t seed);

void apply_split(std::vector<EditTriplet>& triplets,
                 const std::array<double, 3>& ratios, std::uint64_t seed);

// Triplet container: versioned TSV manifest plus one motion array file per
// clip. Round trips motions bit-for-bit and texts byte-identically.
void save_triplets(const std::string& dir, const std::vector<EditTriplet>& triplets);
std::vector<EditTriplet> load_triplets(const std::string& dir);

std::vector<const EditTriplet*> select_split(const std::vector<EditTriplet>& all,
                                             Split split);

}  // namespace motedit
