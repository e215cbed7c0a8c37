#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "motedit/features.hpp"
#include "motedit/motion.hpp"

namespace motedit {

// Raw-array container: little-endian, magic "MARR", version u32, dtype u8
// (0 = float32), ndim u8, u16 pad, ndim x u64 shape, row-major payload.
void save_array_f32(const std::string& path, const std::vector<std::uint64_t>& shape,
                    const std::vector<float>& payload);
std::vector<float> load_array_f32(const std::string& path,
                                  std::vector<std::uint64_t>& shape);

// Motions are stored as one [F, 201] float32 array per clip:
// 3 translation + 9 root orientation + 21 x 9 body rotations, row-major.
void save_motion(const std::string& path, const Motion& m);
Motion load_motion(const std::string& path, double fps);

// Feature sequences are stored as [F, 207] float32 arrays.
void save_features(const std::string& path, const FeatureSequence& f);
FeatureSequence load_features(const std::string& path);

// Motion directory: `manifest.txt` (versioned text) plus one array file per
// motion. Entry order is preserved.
struct MotionStoreEntry {
  std::string id;
  std::string file;  // relative to the directory
  double fps = 20.0;
  int frames = 0;
};
void save_motion_dir(const std::string& dir,
                     const std::vector<std::pair<std::string, Motion>>& motions);
std::vector<MotionStoreEntry> read_motion_manifest(const std::string& dir);
Motion load_motion_from_dir(const std::string& dir, const MotionStoreEntry& e);

// Stats file: versioned text with full-precision mean/std/count.
void save_stats(const std::string& path, const FeatureStats& stats);
FeatureStats load_stats(const std::string& path);

// Writes via a temp file in the same directory, then renames over the target.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Round a double to the nearest float32-representable value. The array
// container stores float32; motions built from this survive a store
// round trip bit-for-bit.
inline double f32_exact(double v) { return static_cast<double>(static_cast<float>(v)); }
Motion quantize_f32(const Motion& m);

}  // namespace motedit
