#pragma once

#include <cstdint>

namespace deskagent::aci {

/// Axis-aligned pixel rectangle. Degenerate (zero-area) boxes are permitted.
struct BoundingBox {
    int x = 0;
    int y = 0;
    int w = 0;  // >= 0
    int h = 0;  // >= 0

    std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }
    int center_x() const { return x + w / 2; }
    int center_y() const { return y + h / 2; }

    bool operator==(const BoundingBox&) const = default;
};

/// Intersection-over-union of two boxes. Total: returns 0 when the union is empty.
double compute_iou(const BoundingBox& a, const BoundingBox& b);

}  // namespace deskagent::aci
