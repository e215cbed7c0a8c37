#include "motedit/synth.hpp"

#include <iomanip>
#include <sstream>

namespace motedit {

namespace {

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

// Mirror pairs of body-pose indices (joint id minus one).
constexpr std::pair<int, int> kMirrorJointPairs[] = {
    {kLeftHip, kRightHip},       {kLeftKnee, kRightKnee},
    {kLeftAnkle, kRightAnkle},   {kLeftFoot, kRightFoot},
    {kLeftCollar, kRightCollar}, {kLeftShoulder, kRightShoulder},
    {kLeftElbow, kRightElbow},   {kLeftWrist, kRightWrist}};

Mat3 reflect_x() {
  Mat3 s = Mat3::Identity();
  s(0, 0) = -1.0;
  return s;
}

struct PoseFrame {
  Vec3 trans = Vec3::Zero();
  Mat3 orient = Mat3::Identity();
  std::vector<Mat3> body = std::vector<Mat3>(kNumBodyJoints, Mat3::Identity());

  void set(int joint, const Mat3& r) { body[joint - 1] = r; }
};

PoseFrame pose_at(const SynthParams& p, double time, double tau) {
  PoseFrame f;
  const int shoulder = p.side == 0 ? kLeftShoulder : kRightShoulder;
  const int elbow = p.side == 0 ? kLeftElbow : kRightElbow;
  const double arm_sign = p.side == 0 ? -1.0 : 1.0;  // Ry sign that raises the arm

  switch (p.family) {
    case MotionFamily::kArmRaise: {
      const double a = p.amp * smoothstep(tau / p.rate);
      f.set(shoulder, rot_y(arm_sign * a));
      f.set(elbow, rot_y(arm_sign * p.aux * smoothstep(tau / p.rate)));
      f.set(kSpine2, rot_x(0.05 * std::sin(2.0 * M_PI * tau)));
      break;
    }
    case MotionFamily::kSquat: {
      const double w = std::pow(std::sin(M_PI * p.reps * tau), 2.0);
      f.set(kLeftKnee, rot_x(p.amp * w));
      f.set(kRightKnee, rot_x(p.amp * w));
      f.set(kLeftHip, rot_x(-0.8 * p.amp * w));
      f.set(kRightHip, rot_x(-0.8 * p.amp * w));
      f.set(kLeftShoulder, rot_z(p.aux * w));
      f.set(kRightShoulder, rot_z(-p.aux * w));
      f.trans.z() = -0.3 * p.amp * w;
      break;
    }
    case MotionFamily::kWalkLine: {
      const double phase = 2.0 * M_PI * p.freq * time;
      const double s = std::sin(phase);
      f.trans.y() = p.dir * p.rate * time;
      f.trans.z() = 0.02 * (std::cos(2.0 * phase) - 1.0);
      f.set(kLeftHip, rot_x(p.amp * s));
      f.set(kRightHip, rot_x(-p.amp * s));
      f.set(kLeftKnee, rot_x(0.5 * p.amp * (1.0 - std::cos(phase))));
      f.set(kRightKnee, rot_x(0.5 * p.amp * (1.0 + std::cos(phase))));
      f.set(kLeftShoulder, rot_z(-p.aux * s));
      f.set(kRightShoulder, rot_z(-p.aux * s));
      break;
    }
    case MotionFamily::kWalkCircle: {
      // Position is integrated by the renderer; here only pose and heading.
      const double phase = 2.0 * M_PI * p.freq * time;
      const double s = std::sin(phase);
      const double heading = p.dir * p.rate * time;
      f.orient = rot_z(heading);
      f.trans.z() = 0.02 * (std::cos(2.0 * phase) - 1.0);
      f.set(kLeftHip, rot_x(0.5 * s));
      f.set(kRightHip, rot_x(-0.5 * s));
      f.set(kLeftKnee, rot_x(0.25 * (1.0 - std::cos(phase))));
      f.set(kRightKnee, rot_x(0.25 * (1.0 + std::cos(phase))));
      f.set(kLeftShoulder, rot_z(-p.aux * s));
      f.set(kRightShoulder, rot_z(-p.aux * s));
      break;
    }
    case MotionFamily::kTurn: {
      const double heading = p.dir * p.amp * smoothstep(tau);
      f.orient = rot_z(heading);
      f.set(kLeftShoulder, rot_z(0.1 * std::sin(2.0 * M_PI * tau)));
      f.set(kRightShoulder, rot_z(-0.1 * std::sin(2.0 * M_PI * tau)));
      break;
    }
    case MotionFamily::kWave: {
      const double raise = p.aux * smoothstep(tau / 0.15);
      const double swing =
          p.amp * std::sin(2.0 * M_PI * p.freq * time) * smoothstep(tau / 0.2);
      f.set(shoulder, rot_y(arm_sign * raise));
      f.set(elbow, rot_y(arm_sign * (0.3 + swing)));
      break;
    }
  }
  return f;
}

}  // namespace

std::string to_string(MotionFamily f) {
  switch (f) {
    case MotionFamily::kArmRaise: return "arm-raise";
    case MotionFamily::kSquat: return "squat";
    case MotionFamily::kWalkLine: return "walk-line";
    case MotionFamily::kWalkCircle: return "walk-circle";
    case MotionFamily::kTurn: return "turn";
    case MotionFamily::kWave: return "wave";
  }
  throw InvalidConfigError("unknown family");
}

std::string to_string(EditOp op) {
  switch (op) {
    case EditOp::kAmplitude: return "amplitude";
    case EditOp::kSpeed: return "speed";
    case EditOp::kMirror: return "mirror";
    case EditOp::kDirection: return "direction";
    case EditOp::kTrim: return "trim";
  }
  throw InvalidConfigError("unknown edit op");
}

Motion render_motion(const SynthParams& p, double fps) {
  const int frames = std::max(2, static_cast<int>(std::lround(p.duration * fps)));
  Motion m;
  m.fps = fps;
  m.root_trans.resize(frames);
  m.root_orient.resize(frames);
  m.body_pose.resize(frames);

  const bool integrate = p.family == MotionFamily::kWalkCircle;
  Vec3 pos = Vec3::Zero();
  for (int t = 0; t < frames; ++t) {
    const double time = t / fps;
    const double tau = frames > 1 ? static_cast<double>(t) / (frames - 1) : 0.0;
    PoseFrame f = pose_at(p, time, tau);
    if (integrate) {
      // Walk along the heading at speed rate * radius.
      if (t > 0) {
        const double heading = p.dir * p.rate * (t - 1) / fps;
        const double speed = p.rate * p.amp;
        pos += (1.0 / fps) * speed * Vec3(-std::sin(heading), std::cos(heading), 0.0);
      }
      f.trans.x() = pos.x();
      f.trans.y() = pos.y();
    }
    m.root_trans[t] = f.trans;
    m.root_orient[t] = f.orient;
    m.body_pose[t] = std::move(f.body);
  }
  return canonicalize(m);
}

Motion mirror_motion(const Motion& m) {
  const Mat3 s = reflect_x();
  Motion out = m;
  for (int t = 0; t < m.frames(); ++t) {
    out.root_trans[t] = s * m.root_trans[t];
    out.root_orient[t] = s * m.root_orient[t] * s;
    std::vector<Mat3> body(kNumBodyJoints);
    for (int j = 1; j < kNumJoints; ++j) {
      body[j - 1] = s * m.body_pose[t][j - 1] * s;
    }
    for (auto [l, r] : kMirrorJointPairs) {
      std::swap(body[l - 1], body[r - 1]);
    }
    out.body_pose[t] = std::move(body);
  }
  return out;
}

std::pair<Motion, SynthParams> apply_edit(const Motion& source,
                                          const SynthParams& p,
                                          const EditSpec& e, double fps) {
  SynthParams q = p;
  switch (e.op) {
    case EditOp::kAmplitude: {
      q.amp = p.amp * e.magnitude;
      return {render_motion(q, fps), q};
    }
    case EditOp::kSpeed: {
      const int f = source.frames();
      const int nf = std::max(2, static_cast<int>(std::ceil(f / e.magnitude)));
      q.duration = p.duration / e.magnitude;
      q.rate = p.family == MotionFamily::kArmRaise ? p.rate : p.rate * e.magnitude;
      q.freq = p.freq * e.magnitude;
      return {resample(source, nf), q};
    }
    case EditOp::kMirror: {
      q.side = 1 - p.side;
      q.dir = -p.dir;
      return {mirror_motion(source), q};
    }
    case EditOp::kDirection: {
      q.dir = -p.dir;
      return {render_motion(q, fps), q};
    }
    case EditOp::kTrim: {
      const int f = source.frames();
      const int cut = std::min(f - 2, std::max(1, static_cast<int>(std::lround(f * e.magnitude))));
      q.duration = p.duration * (f - cut) / f;
      Motion cropped = e.variant == 0 ? crop(source, 0, f - cut)
                                      : crop(source, cut, f);
      return {canonicalize(cropped), q};
    }
  }
  throw InvalidConfigError("unknown edit op");
}

namespace {

int magnitude_bucket(const EditSpec& e) {
  switch (e.op) {
    case EditOp::kAmplitude:
      return std::abs(std::log(e.magnitude)) < 0.4 ? 0 : 1;
    case EditOp::kSpeed:
      return std::abs(std::log(e.magnitude)) < 0.45 ? 0 : 1;
    case EditOp::kTrim:
      return e.magnitude < 0.33 ? 0 : 1;
    default:
      return 0;
  }
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  std::size_t at = 0;
  while ((at = s.find(from, at)) != std::string::npos) {
    s.replace(at, from.size(), to);
    at += to.size();
  }
  return s;
}

const char* kAmpUp[6][3] = {
    {"raise the ARM {ADV}higher", "lift the ARM {ADV}further up", "bring the ARM up {ADV}higher"},
    {"squat down {ADV}deeper", "bend down {ADV}lower", "go down {ADV}further"},
    {"take {ADV}longer steps", "lengthen the stride {ADV}", "step {ADV}further out"},
    {"make the circle {ADV}bigger", "walk a {ADV}wider circle", "widen the circle {ADV}"},
    {"turn {ADV}further around", "rotate {ADV}more", "keep turning {ADV}longer"},
    {"wave with a {ADV}wider motion", "make the wave {ADV}bigger", "swing the hand {ADV}wider"}};

const char* kAmpDown[6][3] = {
    {"raise the ARM {ADV}less high", "don't lift the ARM {ADV}as high", "keep the ARM {ADV}lower"},
    {"squat {ADV}less deep", "don't go down {ADV}as far", "stay {ADV}higher in the squat"},
    {"take {ADV}shorter steps", "shorten the stride {ADV}", "step {ADV}less far"},
    {"make the circle {ADV}smaller", "walk a {ADV}tighter circle", "narrow the circle {ADV}"},
    {"turn {ADV}less far", "rotate {ADV}less", "stop the rotation {ADV}sooner"},
    {"wave with a {ADV}smaller motion", "make the wave {ADV}smaller", "swing the hand {ADV}less"}};

const char* kFaster[3] = {"do it {ADV}faster", "move {ADV}faster", "{ADV}faster"};
const char* kSlower[3] = {"do it {ADV}slower", "move {ADV}slower", "{ADV}slower"};
const char* kMirrorT[3] = {"mirror the motion", "do it with the other side",
                           "use the opposite side"};
const char* kDirTurn[3] = {"turn in the opposite direction", "go the other way around",
                           "reverse the direction"};
const char* kDirLine[3] = {"walk backwards instead", "move in the opposite direction",
                           "go backwards"};
const char* kTrimEnd[3] = {"stop {ADV}earlier", "end the motion {ADV}sooner",
                           "finish {ADV}earlier"};
const char* kTrimStart[3] = {"start {ADV}later", "begin {ADV}later",
                             "skip {ADV}of the beginning"};

}  // namespace

std::string edit_text(const SynthParams& p, const EditSpec& e) {
  const int fam = static_cast<int>(p.family);
  const int bucket = magnitude_bucket(e);
  const int idx = (fam + bucket) % 3;
  std::string tpl;
  std::string adv;
  switch (e.op) {
    case EditOp::kAmplitude:
      tpl = e.magnitude >= 1.0 ? kAmpUp[fam][idx] : kAmpDown[fam][idx];
      adv = bucket == 0 ? "a bit " : "much ";
      break;
    case EditOp::kSpeed:
      tpl = e.magnitude >= 1.0 ? kFaster[idx] : kSlower[idx];
      adv = bucket == 0 ? "a bit " : "much ";
      break;
    case EditOp::kMirror:
      tpl = kMirrorT[(fam + e.variant) % 3];
      break;
    case EditOp::kDirection:
      tpl = p.family == MotionFamily::kWalkLine ? kDirLine[fam % 3] : kDirTurn[fam % 3];
      break;
    case EditOp::kTrim:
      tpl = e.variant == 0 ? kTrimEnd[(fam + bucket) % 3] : kTrimStart[(fam + bucket) % 3];
      adv = bucket == 0 ? "a little " : "much ";
      break;
  }
  return replace_all(replace_all(tpl, "{ADV}", adv), "ARM",
                     p.side == 0 ? "left arm" : "right arm");
}

namespace {

const char* bucket_word(double v, std::initializer_list<double> cuts,
                        std::initializer_list<const char*> words) {
  auto w = words.begin();
  for (double c : cuts) {
    if (v < c) return *w;
    ++w;
  }
  return *w;
}

}  // namespace

std::string motion_description(const SynthParams& p) {
  std::ostringstream out;
  const char* side = p.side == 0 ? "left" : "right";
  switch (p.family) {
    case MotionFamily::kArmRaise:
      out << "a person raises the " << side << " arm "
          << bucket_word(p.amp, {1.0, 1.4}, {"partway up", "up high", "overhead"})
          << " "
          << bucket_word(p.rate, {0.55, 0.65}, {"quickly", "at an even pace", "gradually"});
      break;
    case MotionFamily::kSquat:
      out << "a person squats "
          << bucket_word(p.amp, {0.8, 1.1}, {"slightly", "deeply", "very deeply"})
          << " " << (p.reps >= 2 ? "twice" : "once") << " with arms "
          << bucket_word(p.aux, {0.5}, {"held low", "lifted forward"});
      break;
    case MotionFamily::kWalkLine:
      out << "a person walks " << (p.dir > 0 ? "forward" : "backward") << " "
          << bucket_word(p.rate, {0.85, 1.1}, {"slowly", "at a steady pace", "briskly"})
          << " with "
          << bucket_word(p.amp, {0.45, 0.6}, {"short", "regular", "long"}) << " steps";
      break;
    case MotionFamily::kWalkCircle:
      out << "a person walks in a "
          << bucket_word(p.amp, {1.2, 1.8}, {"tight", "medium", "wide"})
          << " circle to the " << (p.dir > 0 ? "left" : "right") << " "
          << bucket_word(p.rate, {0.7, 0.9}, {"slowly", "steadily", "quickly"});
      break;
    case MotionFamily::kTurn:
      out << "a person turns "
          << bucket_word(p.amp, {2.0, 3.5, 5.0},
                         {"a quarter of the way", "halfway around",
                          "most of the way around", "a full circle"})
          << " to the " << (p.dir > 0 ? "left" : "right") << " "
          << bucket_word(p.duration, {2.0}, {"quickly", "slowly"});
      break;
    case MotionFamily::kWave:
      out << "a person waves the " << side << " hand "
          << bucket_word(p.freq, {1.2, 1.8}, {"slowly", "steadily", "rapidly"})
          << " with "
          << bucket_word(p.amp, {0.5, 0.7}, {"small", "medium", "wide"}) << " swings";
      break;
  }
  return out.str();
}

std::vector<EditTriplet> generate_synthetic_triplets(const SynthConfig& cfg) {
  if (cfg.count < 1) throw InvalidConfigError("gen-synth: count must be >= 1");
  if (cfg.families.empty()) throw InvalidConfigError("gen-synth: no families");
  Rng rng(Rng::derive(cfg.seed, 0x59A7));
  std::vector<EditTriplet> out;
  out.reserve(cfg.count);

  for (int i = 0; i < cfg.count; ++i) {
    SynthParams p;
    p.family = cfg.families[rng.uniform_int(cfg.families.size())];
    p.side = static_cast<int>(rng.uniform_int(2));
    p.dir = rng.uniform() < 0.5 ? 1 : -1;
    p.duration = rng.uniform(cfg.min_duration, cfg.max_duration);
    p.reps = 1 + static_cast<int>(rng.uniform_int(2));
    switch (p.family) {
      case MotionFamily::kArmRaise:
        p.amp = rng.uniform(0.7, 1.5);
        p.rate = rng.uniform(0.45, 0.75);
        p.aux = rng.uniform(0.1, 0.5);
        break;
      case MotionFamily::kSquat:
        p.amp = rng.uniform(0.5, 1.3);
        p.aux = rng.uniform(0.2, 0.8);
        break;
      case MotionFamily::kWalkLine:
        p.rate = rng.uniform(0.6, 1.3);
        p.amp = rng.uniform(0.35, 0.7);
        p.freq = rng.uniform(1.5, 2.2);
        p.aux = rng.uniform(0.2, 0.5);
        break;
      case MotionFamily::kWalkCircle:
        p.rate = rng.uniform(0.5, 1.1);
        p.amp = rng.uniform(0.8, 2.2);
        p.freq = rng.uniform(1.5, 2.2);
        p.aux = rng.uniform(0.2, 0.5);
        break;
      case MotionFamily::kTurn:
        p.amp = rng.uniform(M_PI / 2.0, 2.0 * M_PI);
        break;
      case MotionFamily::kWave:
        p.amp = rng.uniform(0.3, 0.9);
        p.freq = rng.uniform(1.0, 2.2);
        p.aux = rng.uniform(1.2, 1.7);
        break;
    }

    // Operators compatible with the family.
    std::vector<EditOp> ops = {EditOp::kSpeed, EditOp::kTrim};
    switch (p.family) {
      case MotionFamily::kArmRaise:
      case MotionFamily::kWave:
        ops.push_back(EditOp::kAmplitude);
        ops.push_back(EditOp::kMirror);
        break;
      case MotionFamily::kSquat:
        ops.push_back(EditOp::kAmplitude);
        break;
      case MotionFamily::kWalkLine:
        ops.push_back(EditOp::kDirection);
        ops.push_back(EditOp::kMirror);
        break;
      case MotionFamily::kWalkCircle:
      case MotionFamily::kTurn:
        ops.push_back(EditOp::kAmplitude);
        ops.push_back(EditOp::kDirection);
        ops.push_back(EditOp::kMirror);
        break;
    }
    EditSpec e;
    e.op = ops[rng.uniform_int(ops.size())];
    switch (e.op) {
      case EditOp::kAmplitude: {
        const double factors[4] = {1.3, 1.6, 0.7, 0.5};
        e.magnitude = factors[rng.uniform_int(4)];
        break;
      }
      case EditOp::kSpeed: {
        const double factors[4] = {1.4, 2.0, 0.6, 0.75};
        e.magnitude = factors[rng.uniform_int(4)];
        break;
      }
      case EditOp::kTrim:
        e.magnitude = rng.uniform() < 0.5 ? 0.25 : 0.4;
        e.variant = static_cast<int>(rng.uniform_int(2));
        break;
      case EditOp::kMirror:
        e.variant = static_cast<int>(rng.uniform_int(3));
        e.magnitude = 1.0;
        break;
      case EditOp::kDirection:
        e.magnitude = 1.0;
        break;
    }

    EditTriplet t;
    std::ostringstream id;
    id << "syn" << std::setw(6) << std::setfill('0') << i;
    t.id = id.str();
    const Motion source = render_motion(p, cfg.fps);
    auto [target, q] = apply_edit(source, p, e, cfg.fps);
    t.source = quantize_f32(source);
    t.target = quantize_f32(target);
    t.edit_text = edit_text(p, e);
    t.source_desc = motion_description(p);
    t.target_desc = motion_description(q);
    t.provenance = Provenance::kSynthetic;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace motedit
