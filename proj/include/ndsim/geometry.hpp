#pragma once

#include <cmath>
#include <numbers>

namespace ndsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dist2(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(const Vec2& a, const Vec2& b) { return std::sqrt(dist2(a, b)); }

// bearing of b as seen from a, normalized to [0, 2*pi)
inline double bearing(const Vec2& a, const Vec2& b) {
    double ang = std::atan2(b.y - a.y, b.x - a.x);
    if (ang < 0.0) ang += 2.0 * std::numbers::pi;
    return ang;
}

// beam sectors partition [0, 2*pi) into beam_count half-open slices [b*w, (b+1)*w),
// beam 0 starting due east; exact boundary angles land in the lower-indexed beam's
// successor, i.e. floor semantics
inline int sector_of(double ang, int beam_count) {
    const double w = 2.0 * std::numbers::pi / beam_count;
    int b = static_cast<int>(ang / w);
    if (b >= beam_count) b = beam_count - 1;  // ang == 2*pi after rounding
    if (b < 0) b = 0;
    return b;
}

inline int sector_of(const Vec2& from, const Vec2& to, int beam_count) {
    return sector_of(bearing(from, to), beam_count);
}

}  // namespace ndsim
