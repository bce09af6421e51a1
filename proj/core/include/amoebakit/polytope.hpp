#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amoebakit/laurent.hpp"

namespace amoebakit {

using LatticePoint = std::vector<std::int64_t>;

/// Ambient dimension guard for hull and volume computations.
inline constexpr std::size_t kMaxPolytopeDim = 4;

/// Convex lattice polytope stored by its extreme points, sorted
/// lexicographically without duplicates.
class LatticePolytope {
public:
    /// Wraps an already-minimal vertex list. Prefer convexHull().
    LatticePolytope(std::size_t dim, std::vector<LatticePoint> vertices);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<LatticePoint>& vertices() const noexcept { return vertices_; }

    friend bool operator==(const LatticePolytope&, const LatticePolytope&) = default;

private:
    std::size_t dim_;
    std::vector<LatticePoint> vertices_;
};

struct Degrees {
    std::uint64_t alpha = 0;
    std::uint64_t beta = 0;

    friend bool operator==(const Degrees&, const Degrees&) = default;
};

/// Extreme points of conv(points). Exact integer arithmetic; escalates from
/// 128-bit to arbitrary precision on overflow.
LatticePolytope convexHull(std::span<const LatticePoint> points,
                           std::size_t maxDim = kMaxPolytopeDim);

LatticePolytope minkowskiSum(const LatticePolytope& p, const LatticePolytope& q);
LatticePolytope negate(const LatticePolytope& p);
LatticePolytope translateBy(const LatticePolytope& p, const LatticePoint& shift);

/// Dimension of the affine hull of the vertices.
std::size_t affineDimension(const LatticePolytope& p);

/// dim! times the Euclidean volume; zero for lower-dimensional polytopes.
std::uint64_t normalizedVolume(const LatticePolytope& p, std::size_t maxDim = kMaxPolytopeDim);

/// Mixed volume normalized so that MV(P, ..., P) = normalizedVolume(P), i.e.
/// the Bernstein-Kouchnirenko root count of dim generic Laurent polynomials.
std::uint64_t mixedVolume(std::span<const LatticePolytope> polytopes,
                          std::size_t maxDim = kMaxPolytopeDim);

/// alpha = MV(D_1..D_n, D_1..D_n), beta = MV(-D_1..-D_n, D_1..D_n).
Degrees alphaBeta(const PolySystem& system);

} // namespace amoebakit
