#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amoebakit/laurent.hpp"
#include "amoebakit/polytope.hpp"

namespace amoebakit {

enum class FiberSpace { Amoeba, Coamoeba };

std::string toString(FiberSpace space);
FiberSpace fiberSpaceFromString(const std::string& name);

/// Multistart Newton settings. Residuals are relative: |f_j(z)| divided by
/// the sum of the term magnitudes |c_a z^a|.
struct SolverConfig {
    double tol = 1e-10;
    double regularityThreshold = 1e-8;
    double dedupeTol = 1e-7;
    std::size_t randomStarts = 24;
    double searchBox = 12.0;
    std::size_t maxIters = 50;
    std::uint64_t seed = 0;
};

struct FiberSolution {
    LogPolarPoint point;
    double residual = 0.0;
    double minSingular = 0.0;
    int sign = 0;
    int rank = 0;
};

struct FiberReport {
    FiberSpace space = FiberSpace::Amoeba;
    std::vector<double> query;
    std::vector<FiberSolution> solutions;
    std::size_t count = 0;
    long signedCount = 0;
    bool regular = true;
    bool exhaustive = false;
    /// Torus points of the enclosing conj/conj' system (exact oracle only).
    std::size_t enclosingCount = 0;
    std::string notes;
};

/// Solutions of V in the torus e^q S, found by multistart Newton over theta.
FiberReport amoebaFiber(const PolySystem& system, std::span<const double> q,
                        const SolverConfig& cfg = {}, std::optional<Degrees> degrees = std::nullopt);

/// Solutions of V in e^{ip} (R^x)^{2n}: Newton over q in each of the 2^{2n}
/// sign sectors theta = p + pi*sigma.
FiberReport coamoebaFiber(const PolySystem& system, std::span<const double> p,
                          const SolverConfig& cfg = {}, std::optional<Degrees> degrees = std::nullopt);

/// max_j |f_j(z)| / termMagnitude(f_j, z).
double systemResidual(const PolySystem& system, const LogPolarPoint& z);

/// True when some polynomial has a monomial whose modulus at e^q exceeds the
/// sum of all the others, so the torus e^q S misses V entirely.
bool dominantTermExcludes(const PolySystem& system, std::span<const double> q);

/// Smallest singular value of the row-scaled real 2n x 2n Jacobian of the
/// fiber equations. The amoeba and coamoeba charts share this value.
double fiberMinSingular(const PolySystem& system, const LogPolarPoint& z);

// --- tangent-space diagnostics ---------------------------------------------

using ComplexVector = std::vector<Complex>;

/// Orthonormal basis of ker(jacobianW) (the tangent space in log coordinates).
std::vector<ComplexVector> tangentBasis(const PolySystem& system, const LogPolarPoint& z);

/// Interleaved real frame (v_1, i v_1, ..., v_n, i v_n).
std::vector<ComplexVector> realFrame(const std::vector<ComplexVector>& basis);

/// |det(Re U) - det(Im U)| for the 2n columns of `frame`.
double omegaOfFrame(const std::vector<ComplexVector>& frame);

double omegaResidual(const PolySystem& system, const LogPolarPoint& z);

/// Sign of det(Re U); 0 when the point is critical for Log (fiber Jacobian
/// smallest singular value below cfg.regularityThreshold).
int orientationSign(const PolySystem& system, const LogPolarPoint& z, const SolverConfig& cfg = {});

/// dim_R of the kernel of jacobianW restricted to real vectors.
int criticalRank(const PolySystem& system, const LogPolarPoint& z);

/// Moves `start` onto V by minimum-norm Newton steps in log coordinates.
std::optional<LogPolarPoint> projectToVariety(const PolySystem& system, const LogPolarPoint& start,
                                              const SolverConfig& cfg = {});

// --- enclosing systems and the exact curve oracle -----------------------------

/// The n extra polynomials cutting out e^{2ip} conj(V) (coamoeba) or
/// e^{2q} conj'(V) (amoeba).
std::vector<LaurentPolynomial> enclosingPolys(const PolySystem& system, FiberSpace space,
                                              std::span<const double> query);

/// Max relative residual of z over S together with its enclosing polynomials.
double enclosingResidual(const PolySystem& system, FiberSpace space, std::span<const double> query,
                         const LogPolarPoint& z);

/// Number of torus solutions of {f = 0, f conjugated and rotated by e^{2ip}} for a curve.
std::size_t curveConjIntersections(const PolySystem& system, std::span<const double> p,
                                   const SolverConfig& cfg = {});

/// Exhaustive fiber of a curve (n = 1) from resultant elimination of the
/// enclosing system.
FiberReport curveFiberExact(const PolySystem& system, FiberSpace space, std::span<const double> query,
                            const SolverConfig& cfg = {});

/// Exact oracle for n = 1, multistart otherwise.
FiberReport fiber(const PolySystem& system, FiberSpace space, std::span<const double> query,
                  const SolverConfig& cfg = {}, std::optional<Degrees> degrees = std::nullopt);

} // namespace amoebakit
