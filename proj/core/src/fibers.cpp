#include "amoebakit/fibers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "amoebakit/error.hpp"
#include "fiber_internal.hpp"

namespace amoebakit {

std::string toString(FiberSpace space) {
    return space == FiberSpace::Amoeba ? "amoeba" : "coamoeba";
}

FiberSpace fiberSpaceFromString(const std::string& name) {
    if (name == "amoeba") return FiberSpace::Amoeba;
    if (name == "coamoeba") return FiberSpace::Coamoeba;
    throw InvalidArgument("unknown fiber space '" + name + "' (expected amoeba or coamoeba)");
}

namespace detail {

Eigen::MatrixXcd scaledJacobian(const PolySystem& system, const LogPolarPoint& z, Eigen::VectorXcd* values) {
    const auto jac = jacobianW(system, z);
    Eigen::MatrixXcd out(jac.rows, jac.cols);
    if (values) values->resize(static_cast<Eigen::Index>(system.n()));
    for (std::size_t j = 0; j < jac.rows; ++j) {
        const double scale = termMagnitude(system.poly(j), z);
        for (std::size_t k = 0; k < jac.cols; ++k) {
            out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = jac(j, k) / scale;
        }
        if (values) (*values)(static_cast<Eigen::Index>(j)) = evaluate(system.poly(j), z) / scale;
    }
    return out;
}

Eigen::MatrixXd realStack(const Eigen::MatrixXcd& jac) {
    const auto n = jac.rows();
    Eigen::MatrixXd m(2 * n, jac.cols());
    m.topRows(n) = jac.real();
    m.bottomRows(n) = jac.imag();
    return m;
}

FiberSolution describeSolution(const PolySystem& system, LogPolarPoint point, const SolverConfig& cfg) {
    FiberSolution s;
    s.residual = systemResidual(system, point);
    s.minSingular = fiberMinSingular(system, point);
    try {
        s.sign = s.minSingular < cfg.regularityThreshold ? 0 : orientationSign(system, point, cfg);
        s.rank = criticalRank(system, point);
    } catch (const SingularPoint&) {
        s.sign = 0;
        s.rank = static_cast<int>(system.n());
    }
    s.point = std::move(point);
    return s;
}

double pointDistance(const LogPolarPoint& a, const LogPolarPoint& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
        d = std::max(d, std::abs(a.q()[k] - b.q()[k]));
        double dt = std::abs(a.theta()[k] - b.theta()[k]);
        dt = std::min(dt, 2.0 * std::numbers::pi - dt);
        d = std::max(d, dt);
    }
    return d;
}

void finalizeReport(FiberReport& report, const SolverConfig& cfg) {
    std::sort(report.solutions.begin(), report.solutions.end(), [](const auto& a, const auto& b) {
        if (a.point.theta() != b.point.theta()) return a.point.theta() < b.point.theta();
        return a.point.q() < b.point.q();
    });
    report.count = report.solutions.size();
    report.signedCount = 0;
    for (const auto& s : report.solutions) {
        report.signedCount += s.sign;
        if (s.minSingular < cfg.regularityThreshold) {
            report.regular = false;
        }
    }
}

} // namespace detail

double systemResidual(const PolySystem& system, const LogPolarPoint& z) {
    double r = 0.0;
    for (const auto& f : system.polys()) {
        r = std::max(r, std::abs(evaluate(f, z)) / termMagnitude(f, z));
    }
    return r;
}

bool dominantTermExcludes(const PolySystem& system, std::span<const double> q) {
    if (q.size() != system.numVars()) {
        throw DimensionMismatch("DimensionMismatch: query has wrong length");
    }
    for (const auto& f : system.polys()) {
        std::vector<double> logs;
        logs.reserve(f.size());
        for (const auto& [exp, c] : f.terms()) {
            double s = std::log(std::abs(c));
            for (std::size_t k = 0; k < exp.size(); ++k) s += exp[k] * q[k];
            logs.push_back(s);
        }
        const double top = *std::max_element(logs.begin(), logs.end());
        double others = -1.0;
        for (double l : logs) others += std::exp(l - top);
        if (others < 1.0 - 1e-9) {
            return true;
        }
    }
    return false;
}

double fiberMinSingular(const PolySystem& system, const LogPolarPoint& z) {
    const Eigen::MatrixXd m = detail::realStack(detail::scaledJacobian(system, z));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues().minCoeff();
}

std::vector<LaurentPolynomial> enclosingPolys(const PolySystem& system, FiberSpace space,
                                              std::span<const double> query) {
    const std::size_t dim = system.numVars();
    if (query.size() != dim) {
        throw DimensionMismatch("DimensionMismatch: query has wrong length");
    }
    std::vector<LaurentPolynomial> out;
    if (space == FiberSpace::Coamoeba) {
        std::vector<double> theta(dim);
        for (std::size_t k = 0; k < dim; ++k) theta[k] = -2.0 * query[k];
        const LogPolarPoint eps(std::vector<double>(dim, 0.0), theta);
        for (const auto& f : system.polys()) out.push_back(translate(conjPoly(f), eps));
    } else {
        std::vector<double> q(dim);
        for (std::size_t k = 0; k < dim; ++k) q[k] = -2.0 * query[k];
        const LogPolarPoint eps(q, std::vector<double>(dim, 0.0));
        for (const auto& f : system.polys()) out.push_back(translate(conjPrimePoly(f), eps));
    }
    return out;
}

double enclosingResidual(const PolySystem& system, FiberSpace space, std::span<const double> query,
                         const LogPolarPoint& z) {
    double r = systemResidual(system, z);
    for (const auto& g : enclosingPolys(system, space, query)) {
        r = std::max(r, std::abs(evaluate(g, z)) / termMagnitude(g, z));
    }
    return r;
}

FiberReport fiber(const PolySystem& system, FiberSpace space, std::span<const double> query,
                  const SolverConfig& cfg, std::optional<Degrees> degrees) {
    if (system.n() == 1) {
        return curveFiberExact(system, space, query, cfg);
    }
    return space == FiberSpace::Amoeba ? amoebaFiber(system, query, cfg, degrees)
                                       : coamoebaFiber(system, query, cfg, degrees);
}

} // namespace amoebakit
