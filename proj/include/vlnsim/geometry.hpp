#pragma once

#include <Eigen/Dense>

#include "vlnsim/rng.hpp"

namespace vlnsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Oriented bounding box: centroid, full edge lengths, rotation. Columns of R are
// the world directions of the box's local axes; s[i] is the extent along R.col(i).
struct OrientedBox {
    Vec3 c = Vec3::Zero();
    Vec3 s = Vec3::Ones();
    Mat3 R = Mat3::Identity();
};

// True when dims are strictly positive and R is a proper rotation (orthonormal,
// det +1) within `tol`.
bool box_valid(const OrientedBox& box, double tol = 1e-9);

// Throws std::invalid_argument when box_valid fails.
void require_valid_box(const OrientedBox& box);

// Centroid offset calibrated so the translated copy overlaps the original at a
// requested IoU.
struct Perturbation {
    Vec3 delta = Vec3::Zero();
    double achieved_iou = 1.0;
};

// IoU between `box` and its copy translated by `delta`. Exact closed form: in the
// box frame the overlap is a product of per-axis segment overlaps.
double self_translation_iou(const OrientedBox& box, const Vec3& delta);

// Finds t >= 0 with delta = t * signs / sqrt(3) such that the self-translation IoU
// hits `target_iou` within 1e-6. The map t -> IoU is strictly decreasing until it
// reaches zero (at t = |s| every direction has exhausted some local extent), so
// plain bisection on [0, |s|] suffices. signs must be +/-1 per axis.
Perturbation calibrate_offset(const OrientedBox& box, double target_iou,
                              const Eigen::Vector3i& signs);

// Translates the centroid by a calibrated offset with per-axis signs drawn from
// rng. Dimensions and rotation are copied bit-for-bit. Always consumes exactly
// three rng draws, independent of target_iou, so perturbation directions match
// across IoU grid points run with the same seed.
OrientedBox perturb_box(const OrientedBox& box, double target_iou, Rng& rng);

// Brute-force IoU of two boxes by classifying voxel centers of a `resolution`^3
// grid over their joint bounding region. Independent validation path for
// self_translation_iou; do not reuse its overlap formula here.
double voxel_iou_oracle(const OrientedBox& a, const OrientedBox& b, int resolution);

// Serial reference for the OpenMP kernel above. Must produce identical counts.
double voxel_iou_oracle_serial(const OrientedBox& a, const OrientedBox& b, int resolution);

enum class DimDistortMode {
    SwapMinMid,      // exchange the two smallest extents
    EqualizeMinMid,  // replace the two smallest extents by their mean
};

// Aspect-ratio distortion probe. Fires with the given probability (one rng draw
// per call); centroid and rotation are never touched.
OrientedBox distort_dims(const OrientedBox& box, DimDistortMode mode, Rng& rng,
                         double probability);

}  // namespace vlnsim
