#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vlnsim/geometry.hpp"
#include "vlnsim/scene.hpp"

namespace vlnsim {

// How the collision radius is derived from the box dimensions. The ground-plane
// half-diagonal ignores height (agents collide in the plane); the full diagonal
// is the conservative 3D bound.
enum class CollisionRadius {
    HorizontalHalfDiagonal,  // 0.5 * sqrt(sx^2 + sy^2)
    FullHalfDiagonal,        // 0.5 * |s|
};

struct SkillParams {
    double delta_safe = 0.3;  // stopping buffer outside the collision radius, meters
    double delta_pass = 0.5;  // clearance beyond the far face when passing through, meters
    CollisionRadius collision_radius = CollisionRadius::HorizontalHalfDiagonal;
};

double collision_radius(const OrientedBox& box, CollisionRadius mode);

// Raised by through_target when the agent sits in the traversal plane and the
// crossing direction is undefined.
struct GrazingIncidenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stopping point adjacent to the box: back off from the centroid along the
// agent-to-object ray by the collision radius plus the safety buffer.
Vec3 approach_target(const Vec3& p_agent, const OrientedBox& box, const SkillParams& params);

// Crossing point on the far side of the box along its thinnest axis. The normal
// is the rotation column of the minimal dimension (ties to the lowest axis
// index), sign-rectified to continue the agent's direction of travel.
Vec3 through_target(const Vec3& p_agent, const OrientedBox& box, const SkillParams& params);

// Nearest navigable viewpoint by Euclidean distance; ties go to the lowest id.
// Throws std::invalid_argument on an empty set.
std::string project_to_viewpoint(const Vec3& p_target, const std::vector<Viewpoint>& viewpoints);

struct SkillOutcome {
    Vec3 target_point = Vec3::Zero();
    std::string chosen_viewpoint;
};

// Computes the target for `kind` and snaps it onto the viewpoint set.
SkillOutcome execute_skill(SkillKind kind, const Vec3& p_agent, const OrientedBox& box,
                           const SkillParams& params, const std::vector<Viewpoint>& viewpoints);

}  // namespace vlnsim
