#include "motedit/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace motedit {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'M', 'A', 'R', 'R'};
constexpr std::uint32_t kArrayVersion = 1;

template <typename T>
void write_le(std::ostream& out, T v) {
  // Build byte-by-byte so the file is little-endian regardless of host.
  unsigned char buf[sizeof(T)];
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  }
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  }
  T v;
  std::memcpy(&v, &bits, sizeof(T));
  return v;
}

}  // namespace

void save_array_f32(const std::string& path, const std::vector<std::uint64_t>& shape,
                    const std::vector<float>& payload) {
  std::uint64_t total = 1;
  for (auto s : shape) total *= s;
  if (total != payload.size()) {
    throw ShapeError("save_array: payload size does not match shape");
  }
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, 4);
  write_le<std::uint32_t>(out, kArrayVersion);
  out.put(static_cast<char>(0));  // dtype: float32
  out.put(static_cast<char>(shape.size()));
  write_le<std::uint16_t>(out, 0);
  for (auto s : shape) write_le<std::uint64_t>(out, s);
  for (float v : payload) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    write_le<std::uint32_t>(out, bits);
  }
  atomic_write(path, out.str());
}

std::vector<float> load_array_f32(const std::string& path,
                                  std::vector<std::uint64_t>& shape) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_array: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError("load_array: bad magic in " + path);
  }
  const auto version = read_le<std::uint32_t>(in);
  if (version != kArrayVersion) {
    throw ParseError("load_array: unsupported version in " + path);
  }
  const int dtype = in.get();
  const int ndim = in.get();
  read_le<std::uint16_t>(in);
  if (dtype != 0) throw ParseError("load_array: unsupported dtype in " + path);
  shape.resize(ndim);
  std::uint64_t total = 1;
  for (int i = 0; i < ndim; ++i) {
    shape[i] = read_le<std::uint64_t>(in);
    total *= shape[i];
  }
  std::vector<float> payload(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    const auto bits = read_le<std::uint32_t>(in);
    std::memcpy(&payload[i], &bits, 4);
  }
  if (!in) throw ParseError("load_array: truncated file " + path);
  return payload;
}

namespace {

constexpr int kMotionCols = 3 + 9 + kNumBodyJoints * 9;  // 201

}  // namespace

void save_motion(const std::string& path, const Motion& m) {
  const int f = m.frames();
  std::vector<float> payload;
  payload.reserve(static_cast<std::size_t>(f) * kMotionCols);
  for (int t = 0; t < f; ++t) {
    for (int i = 0; i < 3; ++i) payload.push_back(static_cast<float>(m.root_trans[t][i]));
    for (int c = 0; c < 3; ++c)
      for (int r = 0; r < 3; ++r)
        payload.push_back(static_cast<float>(m.root_orient[t](r, c)));
    for (int j = 0; j < kNumBodyJoints; ++j)
      for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r)
          payload.push_back(static_cast<float>(m.body_pose[t][j](r, c)));
  }
  save_array_f32(path, {static_cast<std::uint64_t>(f), kMotionCols}, payload);
}

Motion load_motion(const std::string& path, double fps) {
  std::vector<std::uint64_t> shape;
  const std::vector<float> payload = load_array_f32(path, shape);
  if (shape.size() != 2 || shape[1] != kMotionCols) {
    throw ShapeError("load_motion: expected [F, 201] array in " + path);
  }
  const int f = static_cast<int>(shape[0]);
  Motion m;
  m.fps = fps;
  m.root_trans.resize(f);
  m.root_orient.resize(f);
  m.body_pose.resize(f);
  std::size_t k = 0;
  for (int t = 0; t < f; ++t) {
    for (int i = 0; i < 3; ++i) m.root_trans[t][i] = payload[k++];
    for (int c = 0; c < 3; ++c)
      for (int r = 0; r < 3; ++r) m.root_orient[t](r, c) = payload[k++];
    m.body_pose[t].resize(kNumBodyJoints);
    for (int j = 0; j < kNumBodyJoints; ++j)
      for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r) m.body_pose[t][j](r, c) = payload[k++];
  }
  return m;
}

void save_features(const std::string& path, const FeatureSequence& f) {
  f.check_shape();
  if (f.normalized) {
    throw MustNormalizeError("save_features: store unnormalized features");
  }
  std::vector<float> payload;
  payload.reserve(static_cast<std::size_t>(f.frames()) * kFeatureDim);
  for (int t = 0; t < f.frames(); ++t)
    for (int d = 0; d < kFeatureDim; ++d)
      payload.push_back(static_cast<float>(f.data(t, d)));
  save_array_f32(path, {static_cast<std::uint64_t>(f.frames()), kFeatureDim}, payload);
}

FeatureSequence load_features(const std::string& path) {
  std::vector<std::uint64_t> shape;
  const std::vector<float> payload = load_array_f32(path, shape);
  if (shape.size() != 2 || shape[1] != kFeatureDim) {
    throw ShapeError("load_features: expected [F, 207] array in " + path);
  }
  FeatureSequence f;
  f.data.resize(static_cast<int>(shape[0]), kFeatureDim);
  std::size_t k = 0;
  for (int t = 0; t < f.frames(); ++t)
    for (int d = 0; d < kFeatureDim; ++d) f.data(t, d) = payload[k++];
  f.normalized = false;
  return f;
}

void save_motion_dir(const std::string& dir,
                     const std::vector<std::pair<std::string, Motion>>& motions) {
  fs::create_directories(dir);
  std::ostringstream manifest;
  manifest << "# motion store: motion <id> <file> <fps> <frames>\n";
  manifest << "version 1\n";
  for (const auto& [id, m] : motions) {
    const std::string file = id + ".marr";
    save_motion(dir + "/" + file, m);
    manifest << "motion " << id << ' ' << file << ' ' << m.fps << ' '
             << m.frames() << '\n';
  }
  atomic_write(dir + "/manifest.txt", manifest.str());
}

std::vector<MotionStoreEntry> read_motion_manifest(const std::string& dir) {
  std::ifstream in(dir + "/manifest.txt");
  if (!in) throw IoError("motion store: cannot open manifest in " + dir);
  std::vector<MotionStoreEntry> out;
  std::string line;
  int lineno = 0;
  bool saw_version = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "version") {
      int v;
      ls >> v;
      if (v != 1) {
        throw ParseError("motion manifest line " + std::to_string(lineno) +
                         ": unsupported version");
      }
      saw_version = true;
    } else if (key == "motion") {
      MotionStoreEntry e;
      if (!(ls >> e.id >> e.file >> e.fps >> e.frames)) {
        throw ParseError("motion manifest line " + std::to_string(lineno) +
                         ": malformed entry");
      }
      out.push_back(e);
    } else {
      throw ParseError("motion manifest line " + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
    }
  }
  if (!saw_version) throw ParseError("motion manifest: missing version");
  return out;
}

Motion load_motion_from_dir(const std::string& dir, const MotionStoreEntry& e) {
  return load_motion(dir + "/" + e.file, e.fps);
}

void save_stats(const std::string& path, const FeatureStats& stats) {
  std::ostringstream out;
  out.precision(17);
  out << "version 1\n";
  out << "count " << stats.count << '\n';
  out << "mean";
  for (int d = 0; d < kFeatureDim; ++d) out << ' ' << stats.mean[d];
  out << "\nstd";
  for (int d = 0; d < kFeatureDim; ++d) out << ' ' << stats.std[d];
  out << "\nconstant";
  for (int d = 0; d < kFeatureDim; ++d) out << ' ' << (stats.constant_dims[d] ? 1 : 0);
  out << '\n';
  atomic_write(path, out.str());
}

FeatureStats load_stats(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("stats: cannot open " + path);
  FeatureStats s;
  s.mean.resize(kFeatureDim);
  s.std.resize(kFeatureDim);
  s.constant_dims.assign(kFeatureDim, false);
  std::string key;
  int version = 0;
  in >> key >> version;
  if (key != "version" || version != 1) {
    throw ParseError("stats: bad header in " + path);
  }
  in >> key >> s.count;
  if (key != "count") throw ParseError("stats: missing count in " + path);
  in >> key;
  if (key != "mean") throw ParseError("stats: missing mean in " + path);
  for (int d = 0; d < kFeatureDim; ++d) in >> s.mean[d];
  in >> key;
  if (key != "std") throw ParseError("stats: missing std in " + path);
  for (int d = 0; d < kFeatureDim; ++d) in >> s.std[d];
  in >> key;
  if (key != "constant") throw ParseError("stats: missing flags in " + path);
  for (int d = 0; d < kFeatureDim; ++d) {
    int flag;
    in >> flag;
    s.constant_dims[d] = flag != 0;
  }
  if (!in) throw ParseError("stats: truncated file " + path);
  return s;
}

void atomic_write(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("atomic_write: cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("atomic_write: short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_file: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Motion quantize_f32(const Motion& m) {
  Motion out = m;
  for (int t = 0; t < m.frames(); ++t) {
    for (int i = 0; i < 3; ++i) out.root_trans[t][i] = f32_exact(m.root_trans[t][i]);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        out.root_orient[t](r, c) = f32_exact(m.root_orient[t](r, c));
    for (int j = 0; j < kNumBodyJoints; ++j)
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          out.body_pose[t][j](r, c) = f32_exact(m.body_pose[t][j](r, c));
  }
  return out;
}

}  // namespace motedit
