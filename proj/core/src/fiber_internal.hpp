#pragma once

#include <Eigen/Dense>

#include "amoebakit/fibers.hpp"

namespace amoebakit::detail {

/// jacobianW with row j divided by termMagnitude(f_j, z). When `values` is
/// given it receives f_j(z) / termMagnitude(f_j, z).
Eigen::MatrixXcd scaledJacobian(const PolySystem& system, const LogPolarPoint& z,
                                Eigen::VectorXcd* values = nullptr);

/// [Re J; Im J] for the scaled Jacobian J: the derivative of the fiber
/// equations along real log-modulus directions.
Eigen::MatrixXd realStack(const Eigen::MatrixXcd& jac);

FiberSolution describeSolution(const PolySystem& system, LogPolarPoint point, const SolverConfig& cfg);

/// Sup-distance in (q, theta) with theta compared on the circle.
double pointDistance(const LogPolarPoint& a, const LogPolarPoint& b);

/// Newton in the fiber chart of `space` starting at z; nullopt unless it
/// converges close to z.
std::optional<LogPolarPoint> refineInChart(const PolySystem& system, FiberSpace space, const LogPolarPoint& z,
                                           const SolverConfig& cfg);

/// Nonzero roots of sum c_i x^i (ascending coefficients).
std::vector<Complex> univariateRoots(std::vector<Complex> c);

/// Orders solutions, fills count/signedCount and the regularity flag.
void finalizeReport(FiberReport& report, const SolverConfig& cfg);

} // namespace amoebakit::detail
