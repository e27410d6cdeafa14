#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skein {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// geometry / curve construction

struct EmptyInput final : Error {
    EmptyInput() : Error("curve needs at least two vertices") {}
};

struct NonFiniteCoordinate final : Error {
    std::size_t index;
    explicit NonFiniteCoordinate(std::size_t i)
        : Error("non-finite coordinate at vertex " + std::to_string(i)), index(i) {}
};

struct ConsecutiveDuplicate final : Error {
    std::size_t index;
    explicit ConsecutiveDuplicate(std::size_t i)
        : Error("consecutive duplicate vertex at index " + std::to_string(i)), index(i) {}
};

struct OverlapPresent final : Error {
    std::size_t seg_a, seg_b;
    OverlapPresent(std::size_t a, std::size_t b)
        : Error("segments " + std::to_string(a) + " and " + std::to_string(b) +
                " overlap; separate overlaps first"),
          seg_a(a), seg_b(b) {}
};

struct SeparationTooLarge final : Error {
    explicit SeparationTooLarge(const std::string& detail)
        : Error("detour separation collides with the curve: " + detail) {}
};

// winding

struct PointOnCurve final : Error {
    double distance;
    explicit PointOnCurve(double d)
        : Error("query point lies on the curve (distance " + std::to_string(d) + ")"),
          distance(d) {}
};

struct NumericallyAmbiguous final : Error {
    double residual;
    explicit NumericallyAmbiguous(double r)
        : Error("angle sum residual " + std::to_string(r) + " turns; index unreliable"),
          residual(r) {}
};

struct DegenerateProbe final : Error {
    DegenerateProbe() : Error("all probe ray directions hit a degenerate configuration") {}
};

// untangling

struct ConeSeparationFailure final : Error {
    explicit ConeSeparationFailure(const std::string& detail)
        : Error("no line separates incoming from outgoing strands: " + detail) {}
};

struct RankMismatch final : Error {
    RankMismatch() : Error("vertex star has unequal incoming/outgoing counts") {}
};

struct AngleHypothesisViolated final : Error {
    std::size_t violations;
    explicit AngleHypothesisViolated(std::size_t n)
        : Error(std::to_string(n) + " segment pair(s) violate the angle hypothesis"),
          violations(n) {}
};

struct NonTermination final : Error {
    int budget;
    explicit NonTermination(int b)
        : Error("decomposition did not stabilize within budget " + std::to_string(b)), budget(b) {}
};

struct NoPositiveLoop final : Error {
    NoPositiveLoop() : Error("no loop found whose disk interior has nonzero index") {}
};

struct NestingViolated final : Error {
    explicit NestingViolated(const std::string& detail)
        : Error("loop disks are neither nested nor disjoint: " + detail) {}
};

// dynamics

struct FixedSeed final : Error {
    FixedSeed() : Error("seed point is fixed; orbit curve undefined") {}
};

struct NonFiniteValue final : Error {
    explicit NonFiniteValue(const std::string& where)
        : Error("non-finite value while evaluating " + where) {}
};

struct NonFiniteIterate final : Error {
    std::size_t step;
    explicit NonFiniteIterate(std::size_t n)
        : Error("orbit left the finite plane at step " + std::to_string(n)), step(n) {}
};

struct ZeroDegree final : Error {
    ZeroDegree() : Error("displacement field has degree zero along the loop") {}
};

struct BoundaryFixedPoint final : Error {
    double displacement;
    explicit BoundaryFixedPoint(double d)
        : Error("displacement " + std::to_string(d) + " on the loop is below the margin"),
          displacement(d) {}
};

struct NoReturns final : Error {
    NoReturns() : Error("orbit has no near-returns within the iteration budget") {}
};

struct DegenerateOrbitCurve final : Error {
    explicit DegenerateOrbitCurve(const std::string& detail)
        : Error("orbit curve degenerate: " + detail) {}
};

struct CommonFixCheckFailed final : Error {
    std::string label;
    double residual;
    CommonFixCheckFailed(const std::string& map_label, double r)
        : Error("located point is not fixed by '" + map_label + "' (residual " +
                std::to_string(r) + ")"),
          label(map_label), residual(r) {}
};

struct CommutationViolation final : Error {
    std::string label_a, label_b;
    double residual;
    CommutationViolation(const std::string& a, const std::string& b, double r)
        : Error("maps '" + a + "' and '" + b + "' do not commute (residual " +
                std::to_string(r) + ")"),
          label_a(a), label_b(b), residual(r) {}
};

struct UnboundedOrbit final : Error {
    std::size_t step;
    explicit UnboundedOrbit(std::size_t n)
        : Error("orbit left the working domain at step " + std::to_string(n)), step(n) {}
};

struct LocalizationFailure final : Error {
    explicit LocalizationFailure(const std::string& detail)
        : Error("common fixed point localization failed: " + detail) {}
};

struct GeometryConstraintViolated final : Error {
    explicit GeometryConstraintViolated(const std::string& detail)
        : Error("counterexample geometry constraint violated: " + detail) {}
};

}  // namespace skein
