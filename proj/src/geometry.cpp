#include "vlnsim/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace vlnsim {

bool box_valid(const OrientedBox& box, double tol) {
    if (!box.c.allFinite() || !box.s.allFinite() || !box.R.allFinite()) return false;
    if (!(box.s.minCoeff() > 0.0)) return false;
    Mat3 should_be_identity = box.R.transpose() * box.R;
    if ((should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
    return std::abs(box.R.determinant() - 1.0) <= tol;
}

void require_valid_box(const OrientedBox& box) {
    if (!box_valid(box))
        throw std::invalid_argument("invalid oriented box: dims must be positive and R a proper rotation");
}

double self_translation_iou(const OrientedBox& box, const Vec3& delta) {
    require_valid_box(box);
    const Vec3 local = box.R.transpose() * delta;
    double overlap = 1.0;
    for (int i = 0; i < 3; ++i) overlap *= std::max(0.0, box.s[i] - std::abs(local[i]));
    const double volume = box.s.prod();
    return overlap / (2.0 * volume - overlap);
}

Perturbation calibrate_offset(const OrientedBox& box, double target_iou,
                              const Eigen::Vector3i& signs) {
    require_valid_box(box);
    if (!(target_iou > 0.0 && target_iou <= 1.0))
        throw std::invalid_argument("target_iou must lie in (0, 1], got " + std::to_string(target_iou));
    for (int i = 0; i < 3; ++i)
        if (signs[i] != 1 && signs[i] != -1)
            throw std::invalid_argument("signs must be +/-1 per axis");

    if (target_iou == 1.0) return Perturbation{Vec3::Zero(), 1.0};

    const Vec3 direction = signs.cast<double>() / std::sqrt(3.0);
    constexpr double kTol = 1e-6;
    constexpr int kMaxIter = 200;

    // IoU(t) is strictly decreasing from 1 at t=0 to 0 at t=|s|.
    double lo = 0.0;
    double hi = box.s.norm();
    for (int iter = 0; iter < kMaxIter; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double iou = self_translation_iou(box, mid * direction);
        if (std::abs(iou - target_iou) <= kTol)
            return Perturbation{mid * direction, iou};
        if (iou > target_iou)
            lo = mid;
        else
            hi = mid;
    }
    throw std::runtime_error("calibrate_offset failed to converge; the forward map should be monotone");
}

OrientedBox perturb_box(const OrientedBox& box, double target_iou, Rng& rng) {
    // Signs are drawn before any early-out so the rng stream advances the same
    // way for every target_iou.
    Eigen::Vector3i signs(rng.sign(), rng.sign(), rng.sign());
    const Perturbation p = calibrate_offset(box, target_iou, signs);
    OrientedBox out = box;
    out.c = box.c + p.delta;
    return out;
}

namespace {

struct BoxFrame {
    Mat3 R_t;
    Vec3 c;
    Vec3 half;

    explicit BoxFrame(const OrientedBox& b) : R_t(b.R.transpose()), c(b.c), half(0.5 * b.s) {}

    bool contains(const Vec3& p) const {
        const Vec3 q = R_t * (p - c);
        return std::abs(q[0]) <= half[0] && std::abs(q[1]) <= half[1] && std::abs(q[2]) <= half[2];
    }
};

void extend_region(const OrientedBox& b, Vec3& lo, Vec3& hi) {
    for (int ix = -1; ix <= 1; ix += 2)
        for (int iy = -1; iy <= 1; iy += 2)
            for (int iz = -1; iz <= 1; iz += 2) {
                const Vec3 corner =
                    b.c + b.R * (0.5 * Vec3(ix * b.s[0], iy * b.s[1], iz * b.s[2]));
                lo = lo.cwiseMin(corner);
                hi = hi.cwiseMax(corner);
            }
}

template <bool Parallel>
double voxel_iou_impl(const OrientedBox& a, const OrientedBox& b, int resolution) {
    require_valid_box(a);
    require_valid_box(b);
    if (resolution < 32) throw std::invalid_argument("voxel oracle needs resolution >= 32 per axis");

    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());
    extend_region(a, lo, hi);
    extend_region(b, lo, hi);

    const Vec3 cell = (hi - lo) / static_cast<double>(resolution);
    const BoxFrame fa(a), fb(b);

    long long inter = 0, uni = 0;
#pragma omp parallel for reduction(+ : inter, uni) schedule(static) if (Parallel)
    for (int ix = 0; ix < resolution; ++ix) {
        const double x = lo[0] + (ix + 0.5) * cell[0];
        for (int iy = 0; iy < resolution; ++iy) {
            const double y = lo[1] + (iy + 0.5) * cell[1];
            for (int iz = 0; iz < resolution; ++iz) {
                const Vec3 p(x, y, lo[2] + (iz + 0.5) * cell[2]);
                const bool ina = fa.contains(p);
                const bool inb = fb.contains(p);
                inter += (ina && inb);
                uni += (ina || inb);
            }
        }
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

double voxel_iou_oracle(const OrientedBox& a, const OrientedBox& b, int resolution) {
    return voxel_iou_impl<true>(a, b, resolution);
}

double voxel_iou_oracle_serial(const OrientedBox& a, const OrientedBox& b, int resolution) {
    return voxel_iou_impl<false>(a, b, resolution);
}

OrientedBox distort_dims(const OrientedBox& box, DimDistortMode mode, Rng& rng,
                         double probability) {
    require_valid_box(box);
    if (probability < 0.0 || probability > 1.0)
        throw std::invalid_argument("distortion probability must lie in [0, 1]");
    if (rng.uniform() >= probability) return box;

    // Indices of the two smallest extents, ties resolved toward lower axis index.
    std::array<int, 3> idx = {0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int l, int r) { return box.s[l] < box.s[r]; });
    OrientedBox out = box;
    if (mode == DimDistortMode::SwapMinMid) {
        std::swap(out.s[idx[0]], out.s[idx[1]]);
    } else {
        const double mean = 0.5 * (box.s[idx[0]] + box.s[idx[1]]);
        out.s[idx[0]] = mean;
        out.s[idx[1]] = mean;
    }
    return out;
}

}  // namespace vlnsim
