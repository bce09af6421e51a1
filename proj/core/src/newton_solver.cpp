// Multistart Newton for amoeba fibers (unknown theta, q fixed) and coamoeba
// fibers (unknown q, theta fixed per sign sector).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

#include "amoebakit/error.hpp"
#include "amoebakit/fibers.hpp"
#include "amoebakit/rng.hpp"
#include "fiber_internal.hpp"

namespace amoebakit {

namespace {

constexpr double kPi = std::numbers::pi;

class ChartNewton {
public:
    ChartNewton(const PolySystem& system, FiberSpace space, std::vector<double> fixed, const SolverConfig& cfg)
        : system_(system), space_(space), fixed_(std::move(fixed)), cfg_(cfg) {}

    LogPolarPoint point(const Eigen::VectorXd& u) const {
        std::vector<double> free(u.data(), u.data() + u.size());
        return space_ == FiberSpace::Amoeba ? LogPolarPoint(fixed_, std::move(free))
                                            : LogPolarPoint(std::move(free), fixed_);
    }

    std::optional<Eigen::VectorXd> solve(Eigen::VectorXd u) const {
        const double maxStep = space_ == FiberSpace::Amoeba ? 1.0 : 2.0;
        const double box = 1.25 * cfg_.searchBox;
        Eigen::VectorXd residual;
        Eigen::MatrixXd jac;
        if (!eval(u, residual, &jac)) return std::nullopt;

        for (std::size_t it = 0; it < cfg_.maxIters; ++it) {
            const double merit = residual.lpNorm<Eigen::Infinity>();
            if (merit <= cfg_.tol * 1e-3) return u;

            // Minimum-norm step: still lands on positive-dimensional fibers,
            // which are then flagged through their vanishing singular value.
            Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-residual);
            const double big = step.lpNorm<Eigen::Infinity>();
            if (!std::isfinite(big)) return std::nullopt;
            if (big > maxStep) step *= maxStep / big;

            // Backtrack on the scaled residual; fall back to the full step.
            Eigen::VectorXd next;
            Eigen::VectorXd nextResidual;
            bool accepted = false;
            double t = 1.0;
            for (int halving = 0; halving < 8; ++halving, t *= 0.5) {
                next = u + t * step;
                if (outside(next, box)) continue;
                if (!eval(next, nextResidual, nullptr)) continue;
                if (nextResidual.norm() < (1.0 - 1e-4 * t) * residual.norm()) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                t = 1.0;
                next = u + step;
                if (outside(next, box)) return std::nullopt;
            }
            const bool tiny = t * step.lpNorm<Eigen::Infinity>() < 1e-12 * (1.0 + u.lpNorm<Eigen::Infinity>());
            u = next;
            if (!eval(u, residual, &jac)) return std::nullopt;
            if (tiny) break;
        }
        if (residual.lpNorm<Eigen::Infinity>() <= cfg_.tol) return u;
        return std::nullopt;
    }

private:
    bool outside(const Eigen::VectorXd& u, double box) const {
        return space_ == FiberSpace::Coamoeba && u.lpNorm<Eigen::Infinity>() > box;
    }

    bool eval(const Eigen::VectorXd& u, Eigen::VectorXd& residual, Eigen::MatrixXd* jac) const {
        try {
            const LogPolarPoint z = point(u);
            Eigen::VectorXcd values;
            const Eigen::MatrixXcd scaled = detail::scaledJacobian(system_, z, &values);
            const auto n = values.size();
            residual.resize(2 * n);
            residual.head(n) = values.real();
            residual.tail(n) = values.imag();
            if (jac) {
                // d/dtheta = i * d/dw, d/dq = d/dw.
                *jac = space_ == FiberSpace::Amoeba
                           ? detail::realStack(Complex(0.0, 1.0) * scaled)
                           : detail::realStack(scaled);
            }
            return residual.allFinite();
        } catch (const OverflowError&) {
            return false;
        }
    }

    const PolySystem& system_;
    FiberSpace space_;
    std::vector<double> fixed_;
    const SolverConfig& cfg_;
};

void addUnique(std::vector<LogPolarPoint>& found, LogPolarPoint z, double tol) {
    for (const auto& f : found) {
        if (detail::pointDistance(f, z) < tol) return;
    }
    found.push_back(std::move(z));
}

FiberReport assemble(const PolySystem& system, FiberSpace space, std::span<const double> query,
                     std::vector<LogPolarPoint> found, const SolverConfig& cfg) {
    FiberReport report;
    report.space = space;
    report.query.assign(query.begin(), query.end());
    report.exhaustive = false;
    for (auto& z : found) {
        report.solutions.push_back(detail::describeSolution(system, std::move(z), cfg));
    }
    detail::finalizeReport(report, cfg);
    return report;
}

/// Log-space points far out on the tentacles of a plane curve. Along the
/// tentacle with outer normal nu of an edge with primitive direction u, z^u
/// tends to a root r of the edge polynomial, so <q, u> = log|r|.
std::vector<Eigen::VectorXd> tentacleStarts(const PolySystem& system, double reach) {
    std::vector<Eigen::VectorXd> starts;
    if (system.n() != 1 || system.numVars() != 2) return starts;
    const auto& f = system.poly(0);
    std::vector<LatticePoint> exps;
    for (const auto& [e, c] : f.terms()) exps.push_back({e[0], e[1]});
    const auto hull = convexHull(exps);
    auto verts = hull.vertices();
    if (verts.size() < 3) return starts;

    double cx = 0.0;
    double cy = 0.0;
    for (const auto& v : verts) {
        cx += static_cast<double>(v[0]);
        cy += static_cast<double>(v[1]);
    }
    cx /= static_cast<double>(verts.size());
    cy /= static_cast<double>(verts.size());
    std::sort(verts.begin(), verts.end(), [&](const auto& a, const auto& b) {
        return std::atan2(static_cast<double>(a[1]) - cy, static_cast<double>(a[0]) - cx) <
               std::atan2(static_cast<double>(b[1]) - cy, static_cast<double>(b[0]) - cx);
    });

    for (std::size_t i = 0; i < verts.size(); ++i) {
        const auto& a = verts[i];
        const auto& b = verts[(i + 1) % verts.size()];
        const std::int64_t dx = b[0] - a[0];
        const std::int64_t dy = b[1] - a[1];
        const std::int64_t g = std::gcd(dx, dy);
        const std::int64_t ux = dx / g;
        const std::int64_t uy = dy / g;
        std::vector<Complex> edge(static_cast<std::size_t>(g) + 1, Complex(0.0, 0.0));
        for (std::int64_t k = 0; k <= g; ++k) {
            const ExponentVector e{static_cast<int>(a[0] + k * ux), static_cast<int>(a[1] + k * uy)};
            if (auto it = f.terms().find(e); it != f.terms().end()) edge[static_cast<std::size_t>(k)] = it->second;
        }
        // Counter-clockwise boundary: the outer normal is u rotated clockwise.
        Eigen::Vector2d u(static_cast<double>(ux), static_cast<double>(uy));
        const Eigen::Vector2d nu = Eigen::Vector2d(u.y(), -u.x()).normalized();
        for (const Complex r : detail::univariateRoots(edge)) {
            const Eigen::Vector2d base = std::log(std::abs(r)) * u / u.squaredNorm();
            for (double t : {0.25, 0.5, 0.8}) starts.emplace_back(base + t * reach * nu);
        }
    }
    return starts;
}

void requireQuery(const PolySystem& system, std::span<const double> query) {
    if (query.size() != system.numVars()) {
        throw DimensionMismatch("DimensionMismatch: query needs " + std::to_string(system.numVars()) +
                                " coordinates, got " + std::to_string(query.size()));
    }
    for (double v : query) {
        if (!std::isfinite(v)) throw InvalidArgument("query coordinates must be finite");
    }
}

} // namespace

namespace detail {

std::optional<LogPolarPoint> refineInChart(const PolySystem& system, FiberSpace space, const LogPolarPoint& z,
                                           const SolverConfig& cfg) {
    const bool amoeba = space == FiberSpace::Amoeba;
    const ChartNewton newton(system, space, amoeba ? z.q() : z.theta(), cfg);
    const auto& free = amoeba ? z.theta() : z.q();
    const Eigen::VectorXd start = Eigen::Map<const Eigen::VectorXd>(free.data(), static_cast<Eigen::Index>(free.size()));
    const auto u = newton.solve(start);
    if (!u || (*u - start).lpNorm<Eigen::Infinity>() > 1e-6) return std::nullopt;
    return newton.point(*u);
}

} // namespace detail

FiberReport amoebaFiber(const PolySystem& system, std::span<const double> q, const SolverConfig& cfg,
                        std::optional<Degrees> degrees) {
    requireQuery(system, q);
    if (dominantTermExcludes(system, q)) {
        FiberReport empty = assemble(system, FiberSpace::Amoeba, q, {}, cfg);
        empty.notes = "excluded by a dominant monomial";
        return empty;
    }
    const Degrees deg = degrees ? *degrees : alphaBeta(system);
    const std::size_t dim = system.numVars();
    const ChartNewton newton(system, FiberSpace::Amoeba, std::vector<double>(q.begin(), q.end()), cfg);

    std::vector<LogPolarPoint> found;
    auto attempt = [&](const Eigen::VectorXd& start) {
        if (auto u = newton.solve(start)) {
            LogPolarPoint z = newton.point(*u);
            if (systemResidual(system, z) <= cfg.tol) addUnique(found, std::move(z), cfg.dedupeTol);
        }
    };

    // Uniform grid of ceil((8 beta)^(1/2n)) points per axis.
    const auto perAxis = static_cast<std::size_t>(
        std::max(1.0, std::ceil(std::pow(8.0 * static_cast<double>(deg.beta), 1.0 / static_cast<double>(dim)) - 1e-9)));
    std::vector<std::size_t> idx(dim, 0);
    while (true) {
        Eigen::VectorXd start(static_cast<Eigen::Index>(dim));
        for (std::size_t k = 0; k < dim; ++k) {
            start(static_cast<Eigen::Index>(k)) = 2.0 * kPi * (static_cast<double>(idx[k]) + 0.5) / static_cast<double>(perAxis);
        }
        attempt(start);
        std::size_t k = 0;
        while (k < dim && ++idx[k] == perAxis) idx[k++] = 0;
        if (k == dim) break;
    }

    SplitMix64 rng(mixSeed(cfg.seed, 0xA40EBA));
    for (std::size_t s = 0; s < cfg.randomStarts; ++s) {
        Eigen::VectorXd start(static_cast<Eigen::Index>(dim));
        for (std::size_t k = 0; k < dim; ++k) start(static_cast<Eigen::Index>(k)) = rng.uniform(0.0, 2.0 * kPi);
        attempt(start);
    }
    return assemble(system, FiberSpace::Amoeba, q, std::move(found), cfg);
}

FiberReport coamoebaFiber(const PolySystem& system, std::span<const double> p, const SolverConfig& cfg,
                          std::optional<Degrees> degrees) {
    requireQuery(system, p);
    const std::size_t dim = system.numVars();
    const double box = cfg.searchBox;

    // Grid of ceil((8 alpha)^(1/2n)) points per axis, sinh-spaced so that it is
    // dense near q = 0 where most basins are small.
    const Degrees deg = degrees ? *degrees : alphaBeta(system);
    const auto perAxis = static_cast<std::size_t>(
        std::max(1.0, std::ceil(std::pow(8.0 * static_cast<double>(deg.alpha), 1.0 / static_cast<double>(dim)) - 1e-9)));
    std::vector<double> ticks(perAxis);
    for (std::size_t j = 0; j < perAxis; ++j) {
        const double t = -1.0 + (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(perAxis);
        ticks[j] = box * std::sinh(3.0 * t) / std::sinh(3.0);
    }

    const auto tentacles = tentacleStarts(system, box);

    std::vector<LogPolarPoint> found;
    for (std::uint64_t sector = 0; sector < (1ULL << dim); ++sector) {
        std::vector<double> theta(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            theta[k] = p[k] + (((sector >> k) & 1ULL) ? kPi : 0.0);
        }
        const ChartNewton newton(system, FiberSpace::Coamoeba, theta, cfg);
        auto attempt = [&](const Eigen::VectorXd& start) {
            if (auto u = newton.solve(start)) {
                LogPolarPoint z = newton.point(*u);
                if (systemResidual(system, z) <= cfg.tol) addUnique(found, std::move(z), cfg.dedupeTol);
            }
        };
        std::vector<std::size_t> idx(dim, 0);
        while (true) {
            Eigen::VectorXd start(static_cast<Eigen::Index>(dim));
            for (std::size_t k = 0; k < dim; ++k) start(static_cast<Eigen::Index>(k)) = ticks[idx[k]];
            attempt(start);
            std::size_t k = 0;
            while (k < dim && ++idx[k] == perAxis) idx[k++] = 0;
            if (k == dim) break;
        }
        for (const auto& start : tentacles) attempt(start);
        SplitMix64 rng(mixSeed(cfg.seed, sector));
        for (std::size_t s = 0; s < cfg.randomStarts; ++s) {
            Eigen::VectorXd start(static_cast<Eigen::Index>(dim));
            for (std::size_t k = 0; k < dim; ++k) start(static_cast<Eigen::Index>(k)) = rng.uniform(-box, box);
            attempt(start);
        }
    }
    return assemble(system, FiberSpace::Coamoeba, p, std::move(found), cfg);
}

} // namespace amoebakit
