#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "gcbot/kinematics.hpp"
#include "gcbot/units.hpp"

using namespace gcbot;
using namespace gcbot::kin;

namespace {

// 4x4 homogeneous-transform oracle, deliberately built as a serial chain
// (relative elbow and wrist joints) instead of the decoupled trig form.
using Mat4 = std::array<std::array<double, 4>, 4>;

Mat4 identity() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Mat4 trans(double x, double y, double z) {
  Mat4 m = identity();
  m[0][3] = x;
  m[1][3] = y;
  m[2][3] = z;
  return m;
}

Mat4 rot_z(double a) {
  Mat4 m = identity();
  m[0][0] = std::cos(a);
  m[0][1] = -std::sin(a);
  m[1][0] = std::sin(a);
  m[1][1] = std::cos(a);
  return m;
}

Mat4 rot_x(double a) {
  Mat4 m = identity();
  m[1][1] = std::cos(a);
  m[1][2] = -std::sin(a);
  m[2][1] = std::sin(a);
  m[2][2] = std::cos(a);
  return m;
}

struct ChainPose {
  Vec3 tip;
  Vec3 elbow;
  Vec3 fore_mid;
  double effector_pitch;  // z-component of the effector forward axis
};

ChainPose chain_oracle(const ArmGeometry& g, const ArmCalibration& cal, const JointAngles& q) {
  const double yaw = deg2rad(cal.yaw.to_world_deg(q.base_yaw_deg));
  const double sh = deg2rad(cal.shoulder.to_world_deg(q.shoulder_deg));
  const double el = deg2rad(cal.elbow.to_world_deg(q.elbow_deg));

  // Serial joints: shoulder lift, relative elbow bend, wrist bend undoing
  // the accumulated pitch (the physical linkage does this passively).
  const Mat4 base = mul(trans(0, 0, g.shoulder_height_cm), rot_z(-yaw));
  const Mat4 at_elbow = mul(base, mul(rot_x(sh), trans(0, g.upper_len_cm, 0)));
  const Mat4 at_wrist = mul(at_elbow, mul(rot_x(el - sh), trans(0, g.fore_len_cm, 0)));
  const Mat4 at_tip = mul(at_wrist, mul(rot_x(-el), trans(0, g.wrist_offset_cm, 0)));
  const Mat4 fore_mid = mul(at_elbow, mul(rot_x(el - sh), trans(0, g.fore_len_cm / 2.0, 0)));

  ChainPose p;
  p.tip = {at_tip[0][3], at_tip[1][3], at_tip[2][3]};
  p.elbow = {at_elbow[0][3], at_elbow[1][3], at_elbow[2][3]};
  p.fore_mid = {fore_mid[0][3], fore_mid[1][3], fore_mid[2][3]};
  p.effector_pitch = at_tip[2][1];  // rotation column for the local +y axis
  return p;
}

double dist3(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

JointAngles servo_pose(double yaw, double sh, double el) {
  JointAngles q;
  q.base_yaw_deg = yaw;
  q.shoulder_deg = sh;
  q.elbow_deg = el;
  return q;
}

}  // namespace

TEST_CASE("forward kinematics orthogonal poses") {
  const ArmGeometry g;
  const ArmCalibration cal;

  // upper link vertical, forearm horizontal
  const Vec3 a = forward_kinematics(g, cal, servo_pose(90, 180, 90));
  CHECK(a.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a.y == doctest::Approx(g.fore_len_cm + g.wrist_offset_cm).epsilon(1e-12));
  CHECK(a.z == doctest::Approx(g.shoulder_height_cm + g.upper_len_cm).epsilon(1e-12));

  // full forward extension
  const Vec3 b = forward_kinematics(g, cal, servo_pose(90, 90, 90));
  CHECK(b.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.y == doctest::Approx(g.upper_len_cm + g.fore_len_cm + g.wrist_offset_cm).epsilon(1e-12));
  CHECK(b.z == doctest::Approx(g.shoulder_height_cm).epsilon(1e-12));
}

TEST_CASE("forward kinematics matches the homogeneous-transform chain") {
  const ArmGeometry g;
  const ArmCalibration cal;
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> servo(0.0, 180.0);
  for (int i = 0; i < 1000; ++i) {
    const JointAngles q = servo_pose(servo(rng), servo(rng), servo(rng));
    const Vec3 fk = forward_kinematics(g, cal, q);
    const ChainPose oracle = chain_oracle(g, cal, q);
    CHECK(dist3(fk, oracle.tip) < 1e-9);
    // the linkage keeps the effector level for every pose
    CHECK(std::abs(oracle.effector_pitch) < 1e-12);
  }
}

TEST_CASE("inverse kinematics boundary and failure cases") {
  const ArmGeometry g;
  const ArmCalibration cal;

  const Vec3 full{0.0, g.upper_len_cm + g.fore_len_cm + g.wrist_offset_cm, g.shoulder_height_cm};
  const auto ik = inverse_kinematics(g, cal, full);
  REQUIRE(ik.ok());
  // straight-arm tie: both links at the same world elevation
  CHECK(cal.shoulder.to_world_deg(ik.angles.shoulder_deg) ==
        doctest::Approx(cal.elbow.to_world_deg(ik.angles.elbow_deg)).epsilon(1e-9));
  CHECK(dist3(forward_kinematics(g, cal, ik.angles), full) < 1e-9);

  // radial reach smaller than the wrist offset
  CHECK(inverse_kinematics(g, cal, {0.0, 0.0, g.shoulder_height_cm}).status ==
        IkStatus::Unreachable);
  // inside the inner annulus: r below |upper - fore|
  CHECK(inverse_kinematics(g, cal, {0.0, g.wrist_offset_cm + 0.5, g.shoulder_height_cm}).status ==
        IkStatus::Unreachable);
  // far outside
  CHECK(inverse_kinematics(g, cal, {0.0, 100.0, 9.0}).status == IkStatus::Unreachable);
  // behind the base: yaw would leave [0, 180]
  CHECK(inverse_kinematics(g, cal, {0.0, -30.0, 9.0}).status == IkStatus::ServoLimit);
}

TEST_CASE("IK round trip over 10000 reachable targets") {
  const ArmGeometry g;
  const ArmCalibration cal;
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> xy(-48.0, 48.0), zz(-35.0, 50.0);
  int solved = 0;
  int attempts = 0;
  double worst = 0.0;
  while (solved < 10000 && attempts < 400000) {
    ++attempts;
    const Vec3 t{xy(rng), xy(rng), zz(rng)};
    const auto ik = inverse_kinematics(g, cal, t);
    if (!ik.ok()) continue;
    ++solved;
    worst = std::max(worst, dist3(forward_kinematics(g, cal, ik.angles), t));

    // azimuth identity and elbow-up branch
    const double yaw_world = cal.yaw.to_world_deg(ik.angles.base_yaw_deg);
    CHECK(yaw_world == doctest::Approx(rad2deg(std::atan2(t.x, t.y))).epsilon(1e-10));
    const double r = std::hypot(t.x, t.y) - g.wrist_offset_cm;
    const double chord = rad2deg(std::atan2(t.z - g.shoulder_height_cm, r));
    CHECK(cal.shoulder.to_world_deg(ik.angles.shoulder_deg) >= chord - 1e-9);
  }
  REQUIRE(solved == 10000);
  CHECK(worst <= 1e-6);
}

TEST_CASE("workspace membership is inclusive") {
  const WorkspaceBounds w;
  CHECK(in_workspace({0, 20, 10}, w));
  CHECK_FALSE(in_workspace({47, 20, 10}, w));
  CHECK(in_workspace({-46, 9, 5}, w));
  CHECK(in_workspace({46, 46, 32}, w));
  CHECK_FALSE(in_workspace({0, 8.999, 10}, w));
}

TEST_CASE("workspace membership is monotone under shrinking toward the center") {
  const WorkspaceBounds w;
  const Vec3 center{(w.x_min_cm + w.x_max_cm) / 2, (w.y_min_cm + w.y_max_cm) / 2,
                    (w.z_min_cm + w.z_max_cm) / 2};
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> x(w.x_min_cm, w.x_max_cm), y(w.y_min_cm, w.y_max_cm),
      z(w.z_min_cm, w.z_max_cm), s(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Vec3 p{x(rng), y(rng), z(rng)};
    REQUIRE(in_workspace(p, w));
    const double k = s(rng);
    const Vec3 q{center.x + k * (p.x - center.x), center.y + k * (p.y - center.y),
                 center.z + k * (p.z - center.z)};
    CHECK(in_workspace(q, w));
  }
}

TEST_CASE("quantize rounding, band flag, tie rule") {
  const ServoSpec spec;  // 1 degree

  auto q = quantize(servo_pose(90, 90.4, 90), spec);
  CHECK(q.angles.shoulder_deg == 90.0);
  CHECK_FALSE(q.degraded);

  q = quantize(servo_pose(90, 30.0, 90), spec);
  CHECK(q.angles.shoulder_deg == 30.0);
  CHECK(q.degraded);

  // half-step ties snap toward the band center
  CHECK(quantize(servo_pose(120.5, 90, 90), spec).angles.base_yaw_deg == 120.0);
  CHECK(quantize(servo_pose(30.5, 90, 90), spec).angles.base_yaw_deg == 31.0);
  CHECK(quantize(servo_pose(89.5, 90, 90), spec).angles.base_yaw_deg == 90.0);
  CHECK(quantize(servo_pose(90.5, 90, 90), spec).angles.base_yaw_deg == 90.0);
}

TEST_CASE("quantize never moves an angle past half a step") {
  const ServoSpec spec;
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> a(0.0, 180.0);
  for (int i = 0; i < 1000; ++i) {
    const JointAngles in = servo_pose(a(rng), a(rng), a(rng));
    const auto out = quantize(in, spec).angles;
    CHECK(std::abs(out.base_yaw_deg - in.base_yaw_deg) <= 0.5 + 1e-12);
    CHECK(std::abs(out.shoulder_deg - in.shoulder_deg) <= 0.5 + 1e-12);
    CHECK(std::abs(out.elbow_deg - in.elbow_deg) <= 0.5 + 1e-12);
  }
}

TEST_CASE("quantization displacement bound from the exhaustive sweep") {
  const ArmGeometry g;
  const ArmCalibration cal;
  const JointAngles full = servo_pose(90, 90, 90);  // max horizontal reach
  const Vec3 ref = forward_kinematics(g, cal, full);

  double bound = 0.0;
  for (double dy : {-0.5, 0.5})
    for (double ds : {-0.5, 0.5})
      for (double de : {-0.5, 0.5}) {
        const JointAngles p = servo_pose(90 + dy, 90 + ds, 90 + de);
        bound = std::max(bound, dist3(forward_kinematics(g, cal, p), ref));
      }

  // order of the advertised half-centimeter servo slop at full reach
  CHECK(bound > 0.4);
  CHECK(bound < 0.9);
}

namespace {

// Independent moment oracle: levers measured as radial-coordinate deltas of
// chain-derived points, not cosine formulas.
struct MomentOracle {
  double shoulder_kg_cm;
  double elbow_kg_cm;
};

MomentOracle moment_oracle(const ArmGeometry& g, const ArmCalibration& cal, const JointAngles& q,
                           double payload_g, const LinkMasses& masses) {
  const ChainPose chain = chain_oracle(g, cal, q);
  const double r_elbow = std::hypot(chain.elbow.x, chain.elbow.y);
  const double r_fore_mid = std::hypot(chain.fore_mid.x, chain.fore_mid.y);
  const double r_tip = std::hypot(chain.tip.x, chain.tip.y);

  const double m_up = masses.upper_g / 1000.0;
  const double m_fore = masses.fore_g / 1000.0;
  const double m_load = payload_g / 1000.0;

  MomentOracle out;
  out.shoulder_kg_cm = m_up * (r_elbow / 2.0) + (m_fore + m_load) * r_elbow;
  out.elbow_kg_cm = m_fore * std::abs(r_fore_mid - r_elbow) + m_load * std::abs(r_tip - r_elbow);
  return out;
}

}  // namespace

TEST_CASE("static torque: vertical arm has no gravity moment") {
  const ArmGeometry g;
  const ArmCalibration cal;
  ArmServoSpecs specs;
  specs.shoulder.stall_torque_kg_cm = 0.01;
  specs.elbow.stall_torque_kg_cm = 0.01;
  // both links straight up: zero horizontal levers everywhere
  const auto r = static_torque_check(g, cal, servo_pose(90, 180, 180), 0.0, LinkMasses{}, specs);
  CHECK(r.ok);
}

TEST_CASE("static torque: 200 g at full reach is fine, 2.5 kg is not") {
  const ArmGeometry g;
  const ArmCalibration cal;
  const ArmServoSpecs specs;  // mg955 8.5 kg*cm on yaw/shoulder/elbow
  const LinkMasses masses;
  const JointAngles full = servo_pose(90, 90, 90);

  const auto light = static_torque_check(g, cal, full, 200.0, masses, specs);
  CHECK(light.ok);

  const auto heavy = static_torque_check(g, cal, full, 2500.0, masses, specs);
  CHECK_FALSE(heavy.ok);
  CHECK(heavy.exceeded == TorqueJoint::Shoulder);

  // both agree with the chain-derived moment oracle
  for (double payload : {0.0, 200.0, 2500.0}) {
    const auto got = static_torque_check(g, cal, full, payload, masses, specs);
    const auto want = moment_oracle(g, cal, full, payload, masses);
    CHECK(got.shoulder_kg_cm == doctest::Approx(want.shoulder_kg_cm).epsilon(1e-9));
    CHECK(got.elbow_kg_cm == doctest::Approx(want.elbow_kg_cm).epsilon(1e-9));
  }
}

TEST_CASE("static torque is monotone in payload") {
  const ArmGeometry g;
  const ArmCalibration cal;
  const ArmServoSpecs specs;
  const LinkMasses masses;
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> servo(0.0, 180.0), load(0.0, 3000.0);
  for (int i = 0; i < 200; ++i) {
    const JointAngles q = servo_pose(servo(rng), servo(rng), servo(rng));
    double a = load(rng), b = load(rng);
    if (a > b) std::swap(a, b);
    if (static_torque_check(g, cal, q, b, masses, specs).ok)
      CHECK(static_torque_check(g, cal, q, a, masses, specs).ok);
  }
}

TEST_CASE("gripper aperture is linear in the screw angle") {
  const GripperModel m;
  CHECK(gripper_aperture(0.0, m) == 0.0);
  CHECK(gripper_aperture(180.0, m) == m.max_aperture_mm);
  CHECK(gripper_aperture(90.0, m) == doctest::Approx(m.max_aperture_mm / 2).epsilon(1e-12));
  CHECK_THROWS_AS(gripper_aperture(-1.0, m), std::invalid_argument);
  CHECK_THROWS_AS(gripper_aperture(181.0, m), std::invalid_argument);
}
