#pragma once

#include <cstdint>
#include <random>

#include "skein/geom.hpp"

namespace skein {

// Deterministic random source. Doubles are derived from raw 64-bit draws by a
// fixed shift-and-scale so that a seed reproduces the identical stream on
// every platform; the distribution helpers of the standard library are
// avoided because their outputs are implementation defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }

    Point2 in_box(const Box2& box) {
        return {uniform(box.lo.x, box.hi.x), uniform(box.lo.y, box.hi.y)};
    }

    Point2 in_disk(Point2 center, double radius) {
        for (;;) {
            Point2 p{uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
            if (p.x * p.x + p.y * p.y <= 1.0) return center + radius * p;
        }
    }

    Point2 on_circle(Point2 center, double radius) {
        double a = uniform(0.0, 6.283185307179586);
        return center + Point2{radius * std::cos(a), radius * std::sin(a)};
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace skein
