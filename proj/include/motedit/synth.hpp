#pragma once

#include "motedit/dataset.hpp"

namespace motedit {

enum class MotionFamily { kArmRaise, kSquat, kWalkLine, kWalkCircle, kTurn, kWave };
enum class EditOp { kAmplitude, kSpeed, kMirror, kDirection, kTrim };

std::string to_string(MotionFamily f);
std::string to_string(EditOp op);

// Parameters of one procedural motion. `amp` is the family's characteristic
// amplitude (peak angle, squat depth, circle radius, turn angle, wave swing);
// `rate` its characteristic rate (profile fraction, walking speed, angular
// speed, wave frequency).
struct SynthParams {
  MotionFamily family = MotionFamily::kArmRaise;
  int side = 0;  // 0 = left, 1 = right
  int dir = 1;   // +1 = leftward/forward, -1 = rightward/backward
  double duration = 2.2;
  double amp = 1.0;
  double rate = 1.0;
  double freq = 1.8;  // gait/wave frequency
  double aux = 0.3;   // secondary amplitude
  int reps = 1;
};

// Renders a canonical motion (frame 0 at the origin, zero heading).
Motion render_motion(const SynthParams& p, double fps);

// A single edit: operator, magnitude (factor or fraction) and a variant
// selector (trim end/start). The rendered edit text is a deterministic
// function of (family, operator, magnitude).
struct EditSpec {
  EditOp op = EditOp::kAmplitude;
  double magnitude = 1.0;
  int variant = 0;
};

// Applies the edit; returns the target motion and the transformed parameters
// (used for the target's description text).
std::pair<Motion, SynthParams> apply_edit(const Motion& source,
                                          const SynthParams& p,
                                          const EditSpec& e, double fps);

std::string edit_text(const SynthParams& p, const EditSpec& e);
std::string motion_description(const SynthParams& p);

// Mirror across the sagittal plane: positions reflect over x = 0 and
// left/right joints swap.
Motion mirror_motion(const Motion& m);

struct SynthConfig {
  int count = 2000;
  double fps = 20.0;
  std::uint64_t seed = 0;
  double min_duration = 2.0;  // seconds per clip before edits
  double max_duration = 2.7;
  std::vector<MotionFamily> families = {
      MotionFamily::kArmRaise, MotionFamily::kSquat,  MotionFamily::kWalkLine,
      MotionFamily::kWalkCircle, MotionFamily::kTurn, MotionFamily::kWave};
};

// Deterministic per seed; motions are float32-exact so the triplet store
// round trips them bit-for-bit.
std::vector<EditTriplet> generate_synthetic_triplets(const SynthConfig& cfg);

}  // namespace motedit
