#include "deskagent/aci/geometry.hpp"

#include <algorithm>

namespace deskagent::aci {

double compute_iou(const BoundingBox& a, const BoundingBox& b) {
    const std::int64_t ix =
        std::max<std::int64_t>(0, std::min<std::int64_t>(a.x + a.w, b.x + b.w) -
                                      std::max<std::int64_t>(a.x, b.x));
    const std::int64_t iy =
        std::max<std::int64_t>(0, std::min<std::int64_t>(a.y + a.h, b.y + b.h) -
                                      std::max<std::int64_t>(a.y, b.y));
    const std::int64_t intersection = ix * iy;
    const std::int64_t uni = a.area() + b.area() - intersection;
    if (uni == 0) return 0.0;
    return static_cast<double>(intersection) / static_cast<double>(uni);
}

}  // namespace deskagent::aci
