#include "motedit/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace motedit {

namespace fs = std::filesystem;

std::string to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  throw InvalidConfigError("unknown split");
}

std::string to_string(Provenance p) {
  return p == Provenance::kMined ? "mined" : "synthetic";
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "val") return Split::kVal;
  if (s == "test") return Split::kTest;
  throw ParseError("unknown split '" + s + "'");
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "mined") return Provenance::kMined;
  if (s == "synthetic") return Provenance::kSynthetic;
  throw ParseError("unknown provenance '" + s + "'");
}

void EditTriplet::validate() const {
  if (edit_text.empty()) throw InvalidConfigError("triplet " + id + ": empty edit text");
  for (const std::string* t : {&edit_text, &source_desc, &target_desc}) {
    if (t->find('\t') != std::string::npos || t->find('\n') != std::string::npos) {
      throw InvalidConfigError("triplet " + id + ": texts may not contain tabs or newlines");
    }
  }
  if (source.fps != target.fps) {
    throw InvalidConfigError("triplet " + id + ": source and target fps differ");
  }
  source.validate();
  target.validate();
  if (!is_canonical(source) || !is_canonical(target)) {
    throw InvalidConfigError("triplet " + id + ": motions must be canonical and aligned");
  }
}

std::vector<Split> split_dataset(std::size_t count,
                                 const std::array<double, 3>& ratios,
                                 std::uint64_t seed) {
  const double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidConfigError("split_dataset: ratios must sum to 1");
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(Rng::derive(seed, 0x5117));
  rng.shuffle(order);

  const auto b1 = static_cast<std::size_t>(std::floor(count * ratios[0]));
  const auto b2 = static_cast<std::size_t>(std::floor(count * (ratios[0] + ratios[1])));
  std::vector<Split> out(count, Split::kTest);
  for (std::size_t pos = 0; pos < count; ++pos) {
    const Split s = pos < b1 ? Split::kTrain : pos < b2 ? Split::kVal : Split::kTest;
    out[order[pos]] = s;
  }
  return out;
}

void apply_split(std::vector<EditTriplet>& triplets,
                 const std::array<double, 3>& ratios, std::uint64_t seed) {
  const std::vector<Split> assignment = split_dataset(triplets.size(), ratios, seed);
  for (std::size_t i = 0; i < triplets.size(); ++i) triplets[i].split = assignment[i];
}

void save_triplets(const std::string& dir, const std::vector<EditTriplet>& triplets) {
  fs::create_directories(dir + "/motions");
  std::ostringstream manifest;
  manifest << "# triplet store: id\tsource\ttarget\tfps\tsplit\tprovenance\t"
              "edit_text\tsource_desc\ttarget_desc\n";
  manifest << "version 1\n";
  for (const EditTriplet& t : triplets) {
    t.validate();
    const std::string sfile = t.id + "_src.marr";
    const std::string tfile = t.id + "_tgt.marr";
    save_motion(dir + "/motions/" + sfile, t.source);
    save_motion(dir + "/motions/" + tfile, t.target);
    manifest << t.id << '\t' << sfile << '\t' << tfile << '\t' << t.source.fps
             << '\t' << to_string(t.split) << '\t' << to_string(t.provenance)
             << '\t' << t.edit_text << '\t' << t.source_desc << '\t'
             << t.target_desc << '\n';
  }
  atomic_write(dir + "/triplets.tsv", manifest.str());
}

std::vector<EditTriplet> load_triplets(const std::string& dir) {
  std::ifstream in(dir + "/triplets.tsv");
  if (!in) throw IoError("triplet store: cannot open " + dir + "/triplets.tsv");
  std::vector<EditTriplet> out;
  std::string line;
  int lineno = 0;
  bool saw_version = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!saw_version) {
      if (line != "version 1") {
        throw ParseError("triplet store line " + std::to_string(lineno) +
                         ": expected 'version 1'");
      }
      saw_version = true;
      continue;
    }
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (cols.size() != 9) {
      throw ParseError("triplet store line " + std::to_string(lineno) +
                       ": expected 9 tab-separated fields, got " +
                       std::to_string(cols.size()));
    }
    EditTriplet t;
    t.id = cols[0];
    const double fps = std::stod(cols[3]);
    t.source = load_motion(dir + "/motions/" + cols[1], fps);
    t.target = load_motion(dir + "/motions/" + cols[2], fps);
    t.split = split_from_string(cols[4]);
    t.provenance = provenance_from_string(cols[5]);
    t.edit_text = cols[6];
    t.source_desc = cols[7];
    t.target_desc = cols[8];
    out.push_back(std::move(t));
  }
  if (!saw_version) throw ParseError("triplet store: missing version header");
  return out;
}

std::vector<const EditTriplet*> select_split(const std::vector<EditTriplet>& all,
                                             Split split) {
  std::vector<const EditTriplet*> out;
  for (const EditTriplet& t : all) {
    if (t.split == split) out.push_back(&t);
  }
  return out;
}

}  // namespace motedit
