#pragma once

#include <optional>

namespace gcbot::geom {

// Conventions used by everything below:
//  - pixel x grows rightward, pixel y grows downward from the top-left corner;
//    frame center is the exact half-integer midpoint, no rounding
//  - the camera tilt angle is measured from the vertical (straight-down) axis
//  - the ray through a pixel row y makes angle tilt + atan((y - cy)/f) with
//    the vertical; the bottom edge row therefore maps to the far view limit
//    h * tan(tilt + half_view)
//  - "forward" is the horizontal component of the camera look direction,
//    "lateral" points right; both in cm on the ground plane

struct CameraModel {
  double half_view_angle_rad = 0.3839724354387525;  // half of vertical view angle (22 deg)
  double tilt_angle_rad = 0.9075712110370514;       // tilt from vertical (52 deg)
  double mount_height_cm = 25.0;                    // lens height above ground
  double image_width_px = 640.0;
  double image_height_px = 480.0;
  double arm_base_offset_cm = 10.0;  // camera to arm-base distance along forward axis

  // f such that the half view angle spans half the image height (square pixels)
  double focal_px() const;

  void validate() const;  // throws std::invalid_argument naming the field
};

struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  void validate() const;  // throws std::invalid_argument unless min < max on both axes
};

// Signed pixel offset of an object center from the frame center.
struct AlignmentError {
  double dx = 0.0;  // object center x - frame center x
  double dy = 0.0;  // object center y - frame center y
};

// Ground position of a pixel's ray: forward range plus lateral (cross-range) offset.
struct GroundPoint {
  double forward_cm = 0.0;
  double lateral_cm = 0.0;
};

// Position in the arm-base ground frame (x lateral-right, y forward).
struct ArmPlanePoint {
  double x_cm = 0.0;
  double y_cm = 0.0;
};

PixelPoint frame_center(const CameraModel& cam);

// Midpoint of the box. Throws std::invalid_argument on a degenerate box.
PixelPoint bbox_center(const BoundingBox& box);

AlignmentError alignment_error(const PixelPoint& frame_c, const PixelPoint& obj_c);

// h * tan(half_view + tilt): range of the bottom-edge ray. Empty when the
// angle sum reaches the horizontal (the ray never hits the ground).
std::optional<double> ground_distance_paper(const CameraModel& cam);

// Range of the ground intercept of the ray through an arbitrary pixel.
// Empty when the ray is at or above the horizontal.
std::optional<double> ground_distance_ray(const CameraModel& cam, const PixelPoint& p);

// Lateral ground offset for a pixel column, given the forward range of its row.
double lateral_offset(const CameraModel& cam, const PixelPoint& p, double forward_cm);

// ground_distance_ray + lateral_offset in one call.
std::optional<GroundPoint> pixel_to_ground(const CameraModel& cam, const PixelPoint& p);

// Shift a camera-frame ground point into the arm-base frame (pure translation
// along the forward axis; lateral passes through).
ArmPlanePoint camera_to_arm_frame(double forward_cm, double lateral_cm, const CameraModel& cam);

}  // namespace gcbot::geom
