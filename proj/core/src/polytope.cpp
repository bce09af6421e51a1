#include "amoebakit/polytope.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "amoebakit/error.hpp"
#include "exact_int.hpp"

namespace amoebakit {

using detail::BigInt;
using detail::Checked128;
using detail::IntMatrix;

namespace {

void checkGuard(std::size_t dim, std::size_t maxDim) {
    if (dim > maxDim) {
        throw InvalidArgument("polytope dimension " + std::to_string(dim) +
                              " exceeds the configured limit " + std::to_string(maxDim));
    }
}

/// Hull data in the full-dimensional case: boundary triangulation plus the
/// extreme point indices.
template <class Int>
struct Triangulation {
    std::vector<std::size_t> extreme;
    Int normalizedVolume{0};
};

template <class Int>
struct Facet {
    std::vector<std::size_t> verts; // sorted point indices
    std::vector<Int> normal;        // outward cofactor normal (not reduced)
    Int offset{0};                  // normal . v for v on the facet
    bool alive = true;
};

template <class Int>
class FullDimHull {
public:
    FullDimHull(const std::vector<std::vector<Int>>& pts, std::size_t dim) : pts_(pts), d_(dim) {}

    /// Requires the points to affinely span R^d, d >= 2.
    Triangulation<Int> run() {
        const auto simplex = initialSimplex();
        interiorSum_.assign(d_, Int(0));
        for (std::size_t i : simplex) {
            for (std::size_t k = 0; k < d_; ++k) interiorSum_[k] += pts_[i][k];
        }
        for (std::size_t omit = 0; omit <= d_; ++omit) {
            std::vector<std::size_t> vs;
            for (std::size_t t = 0; t <= d_; ++t) {
                if (t != omit) vs.push_back(simplex[t]);
            }
            addFacet(std::move(vs));
        }

        std::vector<char> used(pts_.size(), 0);
        for (std::size_t i : simplex) used[i] = 1;
        for (std::size_t i : insertionOrder()) {
            if (!used[i]) insert(i);
        }

        Triangulation<Int> out;
        const std::size_t ref = simplex[0];
        for (const auto& f : facets_) {
            if (!f.alive) continue;
            out.normalizedVolume += detail::absValue(side(f, ref));
        }
        out.extreme = extremePoints();
        return out;
    }

private:
    std::vector<std::size_t> initialSimplex() const {
        std::vector<std::size_t> chosen{0};
        IntMatrix<Int> dirs;
        for (std::size_t i = 1; i < pts_.size() && chosen.size() <= d_; ++i) {
            auto trial = dirs;
            std::vector<Int> v(d_);
            for (std::size_t k = 0; k < d_; ++k) v[k] = pts_[i][k] - pts_[0][k];
            trial.push_back(v);
            if (detail::rank(trial) == trial.size()) {
                dirs = std::move(trial);
                chosen.push_back(i);
            }
        }
        if (chosen.size() != d_ + 1) {
            throw Error("internal: points do not span the ambient space");
        }
        return chosen;
    }

    // Farthest-from-centroid first so that most points are absorbed early.
    std::vector<std::size_t> insertionOrder() const {
        std::vector<Int> sum(d_, Int(0));
        for (const auto& p : pts_) {
            for (std::size_t k = 0; k < d_; ++k) sum[k] += p[k];
        }
        const Int m(static_cast<std::int64_t>(pts_.size()));
        std::vector<std::pair<Int, std::size_t>> keyed;
        keyed.reserve(pts_.size());
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            Int dist(0);
            for (std::size_t k = 0; k < d_; ++k) {
                const Int c = pts_[i][k] * m - sum[k];
                dist += c * c;
            }
            keyed.emplace_back(dist, i);
        }
        std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        std::vector<std::size_t> order;
        order.reserve(keyed.size());
        for (const auto& kv : keyed) order.push_back(kv.second);
        return order;
    }

    Int side(const Facet<Int>& f, std::size_t i) const {
        Int s(0);
        for (std::size_t k = 0; k < d_; ++k) s += f.normal[k] * pts_[i][k];
        return s - f.offset;
    }

    void addFacet(std::vector<std::size_t> verts) {
        std::sort(verts.begin(), verts.end());
        Facet<Int> f;
        f.verts = std::move(verts);
        const auto& base = pts_[f.verts[0]];
        IntMatrix<Int> rows(d_ - 1, std::vector<Int>(d_));
        for (std::size_t r = 1; r < d_; ++r) {
            for (std::size_t k = 0; k < d_; ++k) rows[r - 1][k] = pts_[f.verts[r]][k] - base[k];
        }
        f.normal.resize(d_);
        for (std::size_t k = 0; k < d_; ++k) {
            IntMatrix<Int> minor(d_ - 1, std::vector<Int>());
            for (std::size_t r = 0; r + 1 < d_; ++r) {
                for (std::size_t c = 0; c < d_; ++c) {
                    if (c != k) minor[r].push_back(rows[r][c]);
                }
            }
            const Int m = detail::determinant(minor);
            f.normal[k] = ((d_ - 1 + k) % 2 == 0) ? m : -m;
        }
        f.offset = Int(0);
        for (std::size_t k = 0; k < d_; ++k) f.offset += f.normal[k] * base[k];

        // Orient away from the interior reference (centroid of the seed simplex).
        Int s(0);
        for (std::size_t k = 0; k < d_; ++k) s += f.normal[k] * interiorSum_[k];
        s -= f.offset * Int(static_cast<std::int64_t>(d_ + 1));
        if (s == Int(0)) {
            throw Error("internal: degenerate hull facet");
        }
        if (s > Int(0)) {
            for (auto& c : f.normal) c = -c;
            f.offset = -f.offset;
        }
        facets_.push_back(std::move(f));
    }

    void insert(std::size_t p) {
        std::vector<std::size_t> visible;
        for (std::size_t fi = 0; fi < facets_.size(); ++fi) {
            if (facets_[fi].alive && side(facets_[fi], p) > Int(0)) visible.push_back(fi);
        }
        if (visible.empty()) return;

        std::map<std::vector<std::size_t>, int> ridgeCount;
        for (std::size_t fi : visible) {
            const auto& vs = facets_[fi].verts;
            for (std::size_t omit = 0; omit < vs.size(); ++omit) {
                std::vector<std::size_t> ridge;
                ridge.reserve(vs.size() - 1);
                for (std::size_t t = 0; t < vs.size(); ++t) {
                    if (t != omit) ridge.push_back(vs[t]);
                }
                ++ridgeCount[ridge];
            }
        }
        for (std::size_t fi : visible) facets_[fi].alive = false;
        for (const auto& [ridge, count] : ridgeCount) {
            if (count != 1) continue;
            auto vs = ridge;
            vs.push_back(p);
            addFacet(std::move(vs));
        }
        // Compact occasionally so scans stay proportional to the live boundary.
        if (facets_.size() > 64 && facets_.size() > 4 * liveCount()) {
            std::erase_if(facets_, [](const Facet<Int>& f) { return !f.alive; });
        }
    }

    std::size_t liveCount() const {
        return static_cast<std::size_t>(
            std::count_if(facets_.begin(), facets_.end(), [](const auto& f) { return f.alive; }));
    }

    // A boundary point is a vertex iff the facet normals through it span R^d.
    std::vector<std::size_t> extremePoints() const {
        std::map<std::size_t, std::set<std::vector<Int>>> normalsAt;
        for (const auto& f : facets_) {
            if (!f.alive) continue;
            Int g(0);
            for (const auto& c : f.normal) g = detail::gcd(g, c);
            std::vector<Int> primitive(d_);
            for (std::size_t k = 0; k < d_; ++k) primitive[k] = f.normal[k] / g;
            for (std::size_t v : f.verts) normalsAt[v].insert(primitive);
        }
        std::vector<std::size_t> out;
        for (const auto& [v, normals] : normalsAt) {
            if (normals.size() < d_) continue;
            IntMatrix<Int> m(normals.begin(), normals.end());
            if (detail::rank(m) == d_) out.push_back(v);
        }
        return out;
    }

    const std::vector<std::vector<Int>>& pts_;
    std::size_t d_;
    std::vector<Int> interiorSum_;
    std::vector<Facet<Int>> facets_;
};

struct HullResult {
    std::vector<std::size_t> extreme; // indices into the deduplicated input
    std::size_t affineDim = 0;
    BigInt normalizedVolume{0};       // only meaningful when affineDim == ambient
};

template <class Int>
HullResult hullImpl(const std::vector<LatticePoint>& points, std::size_t dim) {
    std::vector<std::vector<Int>> pts(points.size(), std::vector<Int>(dim));
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t k = 0; k < dim; ++k) pts[i][k] = Int(points[i][k]);
    }

    // Affine basis of the point set.
    IntMatrix<Int> dirs;
    for (std::size_t i = 1; i < pts.size() && dirs.size() < dim; ++i) {
        std::vector<Int> v(dim);
        for (std::size_t k = 0; k < dim; ++k) v[k] = pts[i][k] - pts[0][k];
        auto trial = dirs;
        trial.push_back(v);
        if (detail::rank(trial) == trial.size()) dirs = std::move(trial);
    }
    const std::size_t k = dirs.size();

    HullResult out;
    out.affineDim = k;
    if (k == 0) {
        out.extreme = {0};
        return out;
    }
    if (k == dim) {
        if (dim == 1) {
            std::size_t lo = 0, hi = 0;
            for (std::size_t i = 1; i < pts.size(); ++i) {
                if (pts[i][0] < pts[lo][0]) lo = i;
                if (pts[i][0] > pts[hi][0]) hi = i;
            }
            out.extreme = {lo, hi};
            out.normalizedVolume = detail::toBig(pts[hi][0] - pts[lo][0]);
            return out;
        }
        FullDimHull<Int> hull(pts, dim);
        auto tri = hull.run();
        out.extreme = std::move(tri.extreme);
        out.normalizedVolume = detail::toBig(tri.normalizedVolume);
        return out;
    }

    // Lower-dimensional: project onto k coordinates on which the affine hull
    // maps injectively, then recurse. Extreme points are preserved.
    std::vector<std::size_t> coords(k);
    std::vector<std::size_t> pick(dim);
    std::iota(pick.begin(), pick.end(), 0);
    std::vector<bool> mask(dim, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    bool found = false;
    do {
        std::vector<std::size_t> cs;
        for (std::size_t c = 0; c < dim; ++c) {
            if (mask[c]) cs.push_back(c);
        }
        IntMatrix<Int> minor(k, std::vector<Int>(k));
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c = 0; c < k; ++c) minor[r][c] = dirs[r][cs[c]];
        }
        if (detail::determinant(minor) != Int(0)) {
            coords = cs;
            found = true;
            break;
        }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    if (!found) {
        throw Error("internal: no injective coordinate projection");
    }

    std::vector<LatticePoint> projected(points.size(), LatticePoint(k));
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t c = 0; c < k; ++c) projected[i][c] = points[i][coords[c]];
    }
    auto sub = hullImpl<Int>(projected, k);
    out.extreme = std::move(sub.extreme);
    return out;
}

HullResult hull(const std::vector<LatticePoint>& points, std::size_t dim) {
    try {
        return hullImpl<Checked128>(points, dim);
    } catch (const detail::Overflow128&) {
        return hullImpl<BigInt>(points, dim);
    }
}

std::vector<LatticePoint> dedupe(std::span<const LatticePoint> points) {
    std::vector<LatticePoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::uint64_t toU64(const BigInt& v) {
    if (v < 0 || v > BigInt(std::numeric_limits<std::uint64_t>::max())) {
        throw OverflowError("OverflowError: volume does not fit in 64 bits");
    }
    return v.convert_to<std::uint64_t>();
}

} // namespace

LatticePolytope::LatticePolytope(std::size_t dim, std::vector<LatticePoint> vertices)
    : dim_(dim), vertices_(std::move(vertices)) {
    if (vertices_.empty()) {
        throw InvalidArgument("polytope needs at least one vertex");
    }
    for (const auto& v : vertices_) {
        if (v.size() != dim_) {
            throw DimensionMismatch("DimensionMismatch: vertex of wrong length");
        }
    }
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
}

LatticePolytope convexHull(std::span<const LatticePoint> points, std::size_t maxDim) {
    if (points.empty()) {
        throw InvalidArgument("convex hull of an empty point set");
    }
    const std::size_t dim = points.front().size();
    checkGuard(dim, maxDim);
    for (const auto& p : points) {
        if (p.size() != dim) {
            throw DimensionMismatch("DimensionMismatch: points of different lengths");
        }
    }
    auto pts = dedupe(points);
    const auto h = hull(pts, dim);
    std::vector<LatticePoint> verts;
    verts.reserve(h.extreme.size());
    for (std::size_t i : h.extreme) verts.push_back(pts[i]);
    return LatticePolytope(dim, std::move(verts));
}

LatticePolytope minkowskiSum(const LatticePolytope& p, const LatticePolytope& q) {
    if (p.dim() != q.dim()) {
        throw DimensionMismatch("DimensionMismatch: Minkowski sum of polytopes in different dimensions");
    }
    std::vector<LatticePoint> sums;
    sums.reserve(p.vertices().size() * q.vertices().size());
    for (const auto& a : p.vertices()) {
        for (const auto& b : q.vertices()) {
            LatticePoint s(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) s[k] = a[k] + b[k];
            sums.push_back(std::move(s));
        }
    }
    return convexHull(sums, std::max(p.dim(), kMaxPolytopeDim));
}

LatticePolytope negate(const LatticePolytope& p) {
    std::vector<LatticePoint> verts = p.vertices();
    for (auto& v : verts) {
        for (auto& c : v) c = -c;
    }
    return LatticePolytope(p.dim(), std::move(verts));
}

LatticePolytope translateBy(const LatticePolytope& p, const LatticePoint& shift) {
    if (shift.size() != p.dim()) {
        throw DimensionMismatch("DimensionMismatch: shift vector of wrong length");
    }
    std::vector<LatticePoint> verts = p.vertices();
    for (auto& v : verts) {
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += shift[k];
    }
    return LatticePolytope(p.dim(), std::move(verts));
}

std::size_t affineDimension(const LatticePolytope& p) {
    return hull(p.vertices(), p.dim()).affineDim;
}

std::uint64_t normalizedVolume(const LatticePolytope& p, std::size_t maxDim) {
    checkGuard(p.dim(), maxDim);
    const auto h = hull(p.vertices(), p.dim());
    if (h.affineDim < p.dim()) return 0;
    return toU64(h.normalizedVolume);
}

std::uint64_t mixedVolume(std::span<const LatticePolytope> polytopes, std::size_t maxDim) {
    const std::size_t n = polytopes.size();
    if (n == 0) {
        throw InvalidArgument("mixed volume of zero polytopes");
    }
    checkGuard(n, maxDim);
    for (const auto& p : polytopes) {
        if (p.dim() != n) {
            throw DimensionMismatch("DimensionMismatch: mixed volume needs " + std::to_string(n) +
                                    " polytopes in dimension " + std::to_string(n));
        }
    }

    // Sum_{S nonempty} (-1)^{n-|S|} vol_n(sum_{i in S} P_i), with N!-normalized volumes.
    BigInt total = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::optional<LatticePolytope> sum;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            sum = sum ? minkowskiSum(*sum, polytopes[i]) : polytopes[i];
        }
        const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
        const BigInt vol = normalizedVolume(*sum, maxDim);
        if ((n - size) % 2 == 0) {
            total += vol;
        } else {
            total -= vol;
        }
    }
    BigInt factorial = 1;
    for (std::size_t k = 2; k <= n; ++k) factorial *= k;
    if (total < 0 || total % factorial != 0) {
        throw Error("internal: mixed volume alternating sum is not a nonnegative multiple of n!");
    }
    return toU64(total / factorial);
}

Degrees alphaBeta(const PolySystem& system) {
    std::vector<LatticePolytope> newton;
    for (const auto& f : system.polys()) newton.push_back(newtonPolytope(f));

    std::vector<LatticePolytope> same = newton;
    same.insert(same.end(), newton.begin(), newton.end());
    std::vector<LatticePolytope> mixed;
    for (const auto& p : newton) mixed.push_back(negate(p));
    mixed.insert(mixed.end(), newton.begin(), newton.end());

    Degrees d;
    d.alpha = mixedVolume(same, std::max(system.numVars(), kMaxPolytopeDim));
    d.beta = mixedVolume(mixed, std::max(system.numVars(), kMaxPolytopeDim));
    if (d.beta % 2 != 0) {
        throw Error("internal: conj'-degree came out odd");
    }
    return d;
}

} // namespace amoebakit
