#include "gcbot/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "gcbot/units.hpp"

namespace gcbot::geom {

double CameraModel::focal_px() const {
  return (image_height_px / 2.0) / std::tan(half_view_angle_rad);
}

void CameraModel::validate() const {
  if (!(half_view_angle_rad > 0.0 && half_view_angle_rad < kPi / 2.0))
    throw std::invalid_argument("camera.half_view_angle_deg: must be in (0, 90)");
  if (!(tilt_angle_rad >= 0.0 && tilt_angle_rad < kPi / 2.0))
    throw std::invalid_argument("camera.tilt_angle_deg: must be in [0, 90)");
  if (!(half_view_angle_rad + tilt_angle_rad < kPi / 2.0))
    throw std::invalid_argument(
        "camera.tilt_angle_deg: tilt + half view angle must stay below 90 "
        "(bottom-edge ray must hit the ground)");
  if (!(mount_height_cm > 0.0))
    throw std::invalid_argument("camera.mount_height_cm: must be > 0");
  if (!(image_width_px > 0.0 && image_height_px > 0.0))
    throw std::invalid_argument("camera.image_width_px/image_height_px: must be > 0");
}

void BoundingBox::validate() const {
  if (!(x_min < x_max) || !(y_min < y_max))
    throw std::invalid_argument("bbox: min must be strictly below max on both axes");
}

PixelPoint frame_center(const CameraModel& cam) {
  return {cam.image_width_px / 2.0, cam.image_height_px / 2.0};
}

PixelPoint bbox_center(const BoundingBox& box) {
  box.validate();
  return {(box.x_min + box.x_max) / 2.0, (box.y_min + box.y_max) / 2.0};
}

AlignmentError alignment_error(const PixelPoint& frame_c, const PixelPoint& obj_c) {
  return {obj_c.x - frame_c.x, obj_c.y - frame_c.y};
}

std::optional<double> ground_distance_paper(const CameraModel& cam) {
  const double angle = cam.half_view_angle_rad + cam.tilt_angle_rad;
  if (angle >= kPi / 2.0) return std::nullopt;
  return cam.mount_height_cm * std::tan(angle);
}

std::optional<double> ground_distance_ray(const CameraModel& cam, const PixelPoint& p) {
  const double dy = p.y - frame_center(cam).y;
  const double ray_angle = cam.tilt_angle_rad + std::atan(dy / cam.focal_px());
  if (ray_angle >= kPi / 2.0) return std::nullopt;
  return cam.mount_height_cm * std::tan(ray_angle);
}

double lateral_offset(const CameraModel& cam, const PixelPoint& p, double forward_cm) {
  // Depth along the optical axis is the same for every column of the row.
  const double axis_depth =
      forward_cm * std::sin(cam.tilt_angle_rad) + cam.mount_height_cm * std::cos(cam.tilt_angle_rad);
  const double dx = p.x - frame_center(cam).x;
  return dx / cam.focal_px() * axis_depth;
}

std::optional<GroundPoint> pixel_to_ground(const CameraModel& cam, const PixelPoint& p) {
  const auto forward = ground_distance_ray(cam, p);
  if (!forward) return std::nullopt;
  return GroundPoint{*forward, lateral_offset(cam, p, *forward)};
}

ArmPlanePoint camera_to_arm_frame(double forward_cm, double lateral_cm, const CameraModel& cam) {
  return {lateral_cm, forward_cm - cam.arm_base_offset_cm};
}

}  // namespace gcbot::geom
