#include <algorithm>
#include <cmath>

#include "amoebakit/error.hpp"
#include "amoebakit/fibers.hpp"
#include "fiber_internal.hpp"

namespace amoebakit {

namespace {

// Below this the scaled holomorphic Jacobian counts as rank deficient.
constexpr double kSingularJacobian = 1e-10;
// Singular values of the real stacked Jacobian treated as zero for rank.
constexpr double kRankThreshold = 1e-8;

} // namespace

std::vector<ComplexVector> tangentBasis(const PolySystem& system, const LogPolarPoint& z) {
    const Eigen::MatrixXcd jac = detail::scaledJacobian(system, z);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv.minCoeff() < kSingularJacobian) {
        throw SingularPoint();
    }
    const auto n = jac.rows();
    const auto dim = jac.cols();
    std::vector<ComplexVector> basis;
    for (Eigen::Index c = n; c < dim; ++c) {
        ComplexVector v(static_cast<std::size_t>(dim));
        for (Eigen::Index k = 0; k < dim; ++k) v[static_cast<std::size_t>(k)] = svd.matrixV()(k, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<ComplexVector> realFrame(const std::vector<ComplexVector>& basis) {
    std::vector<ComplexVector> frame;
    frame.reserve(2 * basis.size());
    for (const auto& v : basis) {
        frame.push_back(v);
        ComplexVector iv(v.size());
        std::transform(v.begin(), v.end(), iv.begin(), [](Complex c) { return Complex(0.0, 1.0) * c; });
        frame.push_back(std::move(iv));
    }
    return frame;
}

double omegaOfFrame(const std::vector<ComplexVector>& frame) {
    const auto dim = static_cast<Eigen::Index>(frame.size());
    Eigen::MatrixXd re(dim, dim);
    Eigen::MatrixXd im(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        const auto& col = frame[static_cast<std::size_t>(c)];
        if (static_cast<Eigen::Index>(col.size()) != dim) {
            throw DimensionMismatch("DimensionMismatch: frame must be square");
        }
        for (Eigen::Index r = 0; r < dim; ++r) {
            re(r, c) = col[static_cast<std::size_t>(r)].real();
            im(r, c) = col[static_cast<std::size_t>(r)].imag();
        }
    }
    return std::abs(re.determinant() - im.determinant());
}

double omegaResidual(const PolySystem& system, const LogPolarPoint& z) {
    return omegaOfFrame(realFrame(tangentBasis(system, z)));
}

int orientationSign(const PolySystem& system, const LogPolarPoint& z, const SolverConfig& cfg) {
    const auto frame = realFrame(tangentBasis(system, z));
    if (fiberMinSingular(system, z) < cfg.regularityThreshold) {
        return 0;
    }
    const auto dim = static_cast<Eigen::Index>(frame.size());
    Eigen::MatrixXd re(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        for (Eigen::Index r = 0; r < dim; ++r) {
            re(r, c) = frame[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)].real();
        }
    }
    const double det = re.determinant();
    return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
}

int criticalRank(const PolySystem& system, const LogPolarPoint& z) {
    tangentBasis(system, z); // throws SingularPoint
    const Eigen::MatrixXd m = detail::realStack(detail::scaledJacobian(system, z));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) >= kRankThreshold) ++rank;
    }
    return static_cast<int>(m.cols()) - rank;
}

std::optional<LogPolarPoint> projectToVariety(const PolySystem& system, const LogPolarPoint& start,
                                              const SolverConfig& cfg) {
    LogPolarPoint z = start;
    const auto dim = static_cast<Eigen::Index>(system.numVars());
    try {
        for (std::size_t it = 0; it < cfg.maxIters; ++it) {
            Eigen::VectorXcd values;
            const Eigen::MatrixXcd jac = detail::scaledJacobian(system, z, &values);
            if (values.cwiseAbs().maxCoeff() <= cfg.tol * 1e-2) {
                return z;
            }
            Eigen::VectorXcd step = -jac.completeOrthogonalDecomposition().solve(values);
            const double big = step.cwiseAbs().maxCoeff();
            if (!std::isfinite(big)) return std::nullopt;
            if (big > 1.0) step /= big;
            std::vector<double> q = z.q();
            std::vector<double> theta = z.theta();
            for (Eigen::Index k = 0; k < dim; ++k) {
                q[static_cast<std::size_t>(k)] += step(k).real();
                theta[static_cast<std::size_t>(k)] += step(k).imag();
            }
            z = LogPolarPoint(std::move(q), std::move(theta));
        }
    } catch (const OverflowError&) {
        return std::nullopt;
    }
    if (systemResidual(system, z) <= cfg.tol) return z;
    return std::nullopt;
}

} // namespace amoebakit
