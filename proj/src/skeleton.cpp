#include "motedit/skeleton.hpp"

#include <fstream>
#include <sstream>

namespace motedit {

int Skeleton::index_of(const std::string& name) const {
  for (int i = 0; i < kNumJoints; ++i) {
    if (joint_names[i] == name) return i;
  }
  throw InvalidConfigError("skeleton: unknown joint name '" + name + "'");
}

void Skeleton::validate() const {
  if (parent_index[0] != -1) {
    throw InvalidConfigError("skeleton: joint 0 must be the root");
  }
  for (int i = 1; i < kNumJoints; ++i) {
    const int p = parent_index[i];
    if (p < 0 || p >= i) {
      // Parents precede children, which also guarantees a rooted tree.
      throw InvalidConfigError("skeleton: joint " + joint_names[i] +
                               " has invalid parent index");
    }
    const double n = bone_offsets[i].norm();
    if (!std::isfinite(n) || n <= 0.0) {
      throw InvalidConfigError("skeleton: joint " + joint_names[i] +
                               " has non-positive offset norm");
    }
  }
}

Skeleton default_skeleton() {
  Skeleton s;
  struct Row {
    const char* name;
    int parent;
    double x, y, z;
  };
  // z-up, facing +y, left at +x; offsets mirror exactly across x=0.
  static const Row rows[kNumJoints] = {
      {"pelvis", -1, 0.0, 0.0, 0.0},
      {"left_hip", kPelvis, 0.09, 0.0, -0.09},
      {"right_hip", kPelvis, -0.09, 0.0, -0.09},
      {"spine1", kPelvis, 0.0, 0.0, 0.12},
      {"left_knee", kLeftHip, 0.0, 0.0, -0.38},
      {"right_knee", kRightHip, 0.0, 0.0, -0.38},
      {"spine2", kSpine1, 0.0, 0.0, 0.14},
      {"left_ankle", kLeftKnee, 0.0, 0.0, -0.40},
      {"right_ankle", kRightKnee, 0.0, 0.0, -0.40},
      {"spine3", kSpine2, 0.0, 0.0, 0.14},
      {"left_foot", kLeftAnkle, 0.0, 0.12, -0.06},
      {"right_foot", kRightAnkle, 0.0, 0.12, -0.06},
      {"neck", kSpine3, 0.0, 0.0, 0.14},
      {"left_collar", kSpine3, 0.06, 0.0, 0.08},
      {"right_collar", kSpine3, -0.06, 0.0, 0.08},
      {"head", kNeck, 0.0, 0.0, 0.12},
      {"left_shoulder", kLeftCollar, 0.11, 0.0, 0.02},
      {"right_shoulder", kRightCollar, -0.11, 0.0, 0.02},
      {"left_elbow", kLeftShoulder, 0.26, 0.0, 0.0},
      {"right_elbow", kRightShoulder, -0.26, 0.0, 0.0},
      {"left_wrist", kLeftElbow, 0.25, 0.0, 0.0},
      {"right_wrist", kRightElbow, -0.25, 0.0, 0.0},
  };
  for (int i = 0; i < kNumJoints; ++i) {
    s.joint_names[i] = rows[i].name;
    s.parent_index[i] = rows[i].parent;
    s.bone_offsets[i] = Vec3(rows[i].x, rows[i].y, rows[i].z);
  }
  s.validate();
  return s;
}

Skeleton load_skeleton(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("skeleton: cannot open " + path);
  std::vector<std::string> names;
  std::vector<std::string> parents;
  std::vector<Vec3> offsets;
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
      int v = 0;
      ls >> v;
      if (v != 1) {
        throw ParseError("skeleton " + path + ":" + std::to_string(lineno) +
                         ": unsupported version");
      }
      saw_version = true;
    } else if (key == "joint") {
      std::string name, parent;
      double x, y, z;
      if (!(ls >> name >> parent >> x >> y >> z)) {
        throw ParseError("skeleton " + path + ":" + std::to_string(lineno) +
                         ": malformed joint line");
      }
      names.push_back(name);
      parents.push_back(parent);
      offsets.emplace_back(x, y, z);
    } else {
      throw ParseError("skeleton " + path + ":" + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
    }
  }
  if (!saw_version) throw ParseError("skeleton " + path + ": missing version");
  if (names.size() != kNumJoints) {
    throw InvalidConfigError("skeleton " + path + ": expected " +
                             std::to_string(kNumJoints) + " joints, got " +
                             std::to_string(names.size()));
  }
  Skeleton s;
  for (int i = 0; i < kNumJoints; ++i) {
    s.joint_names[i] = names[i];
    s.bone_offsets[i] = offsets[i];
  }
  for (int i = 0; i < kNumJoints; ++i) {
    if (parents[i] == "-") {
      s.parent_index[i] = -1;
    } else {
      s.parent_index[i] = s.index_of(parents[i]);
    }
  }
  s.validate();
  return s;
}

void save_skeleton(const Skeleton& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("skeleton: cannot write " + path);
  out << "# skeleton rest-pose config: joint <name> <parent|-> <x y z meters>\n";
  out << "version 1\n";
  out.precision(17);
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string parent =
        s.parent_index[i] < 0 ? "-" : s.joint_names[s.parent_index[i]];
    out << "joint " << s.joint_names[i] << ' ' << parent << ' '
        << s.bone_offsets[i].x() << ' ' << s.bone_offsets[i].y() << ' '
        << s.bone_offsets[i].z() << '\n';
  }
}

void check_rotation(const Mat3& r, const char* what) {
  const double det = r.determinant();
  const double ortho = (r.transpose() * r - Mat3::Identity()).norm();
  if (std::abs(det - 1.0) > 1e-4 || ortho > 1e-3 || !r.allFinite()) {
    throw InvalidRotationError(std::string(what) +
                               ": matrix is not a proper rotation (det=" +
                               std::to_string(det) + ")");
  }
}

std::array<Vec3, kNumJoints> forward_kinematics(
    const std::vector<Mat3>& body_pose, const Mat3& root_orient,
    const Vec3& root_trans, const Skeleton& skeleton) {
  if (body_pose.size() != kNumBodyJoints) {
    throw ShapeError("forward_kinematics: expected 21 body rotations, got " +
                     std::to_string(body_pose.size()));
  }
  check_rotation(root_orient, "forward_kinematics root_orient");
  for (int j = 0; j < kNumBodyJoints; ++j) {
    check_rotation(body_pose[j], "forward_kinematics body_pose");
  }
  std::array<Vec3, kNumJoints> pos;
  std::array<Mat3, kNumJoints> glob;
  pos[0] = root_trans;
  glob[0] = root_orient;
  for (int i = 1; i < kNumJoints; ++i) {
    const int p = skeleton.parent_index[i];
    pos[i] = pos[p] + glob[p] * skeleton.bone_offsets[i];
    glob[i] = glob[p] * body_pose[i - 1];
  }
  return pos;
}

}  // namespace motedit
