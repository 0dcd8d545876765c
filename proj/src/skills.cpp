#include "vlnsim/skills.hpp"

#include <cmath>

namespace vlnsim {

double collision_radius(const OrientedBox& box, CollisionRadius mode) {
    return mode == CollisionRadius::HorizontalHalfDiagonal
               ? 0.5 * std::hypot(box.s[0], box.s[1])
               : 0.5 * box.s.norm();
}

Vec3 approach_target(const Vec3& p_agent, const OrientedBox& box, const SkillParams& params) {
    require_valid_box(box);
    const Vec3 to_object = box.c - p_agent;
    const double dist = to_object.norm();
    if (dist < 1e-12)
        throw std::invalid_argument("approach undefined: agent coincides with the box centroid");
    const Vec3 u = to_object / dist;
    return box.c - u * (collision_radius(box, params.collision_radius) + params.delta_safe);
}

Vec3 through_target(const Vec3& p_agent, const OrientedBox& box, const SkillParams& params) {
    require_valid_box(box);
    const Vec3 to_object = box.c - p_agent;
    const double dist = to_object.norm();
    if (dist < 1e-12)
        throw std::invalid_argument("through undefined: agent coincides with the box centroid");
    const Vec3 u = to_object / dist;

    int j = 0;
    for (int i = 1; i < 3; ++i)
        if (box.s[i] < box.s[j]) j = i;  // ties keep the lowest axis index
    const Vec3 n = box.R.col(j);

    const double incidence = u.dot(n);
    if (std::abs(incidence) < 1e-9)
        throw GrazingIncidenceError("grazing incidence: agent lies in the traversal plane");
    const double sgn = incidence > 0.0 ? 1.0 : -1.0;
    return box.c + sgn * n * (0.5 * box.s[j] + params.delta_pass);
}

std::string project_to_viewpoint(const Vec3& p_target, const std::vector<Viewpoint>& viewpoints) {
    if (viewpoints.empty())
        throw std::invalid_argument("cannot project onto an empty viewpoint set");
    const Viewpoint* best = &viewpoints.front();
    double best_dist = (p_target - best->position).norm();
    for (const auto& v : viewpoints) {
        const double d = (p_target - v.position).norm();
        if (d < best_dist || (d == best_dist && v.id < best->id)) {
            best = &v;
            best_dist = d;
        }
    }
    return best->id;
}

SkillOutcome execute_skill(SkillKind kind, const Vec3& p_agent, const OrientedBox& box,
                           const SkillParams& params, const std::vector<Viewpoint>& viewpoints) {
    SkillOutcome out;
    out.target_point = kind == SkillKind::Approach ? approach_target(p_agent, box, params)
                                                   : through_target(p_agent, box, params);
    out.chosen_viewpoint = project_to_viewpoint(out.target_point, viewpoints);
    return out;
}

}  // namespace vlnsim
