#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "amoebakit/fibers.hpp"

namespace amoebakit {

enum class VolumeKind { VolA, MultiVolA, MultiVolB };

std::string toString(VolumeKind kind);

/// Axis-aligned box, one [lo, hi] interval per coordinate.
struct Box {
    std::vector<std::pair<double, double>> sides;

    static Box cube(std::size_t dim, double halfWidth);
    double volume() const;
    std::string describe() const;
};

struct VolumeEstimate {
    VolumeKind kind = VolumeKind::MultiVolB;
    double value = 0.0;
    double stdError = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string domain;
    bool truncated = false;
    /// Queries rejected as non-regular and redrawn.
    std::uint64_t nonRegular = 0;
    double nonRegularRate = 0.0;
    /// Sample indices still non-regular after the resample cap.
    std::uint64_t unresolved = 0;
    /// Set when more than 1% of queries were non-regular.
    bool warning = false;
};

struct MeasureConfig {
    SolverConfig solver;
    std::size_t threads = 1;
    std::size_t maxResamples = 16;
};

/// How amoebaVolumeBox visits the box: seeded Monte Carlo draws, or the
/// centres of a uniform grid with `perAxis` cells per coordinate.
struct Sampling {
    enum class Mode { MonteCarlo, Grid };
    Mode mode = Mode::MonteCarlo;
    std::uint64_t count = 10000;

    static Sampling monteCarlo(std::uint64_t samples) { return {Mode::MonteCarlo, samples}; }
    static Sampling grid(std::uint64_t perAxis) { return {Mode::Grid, perAxis}; }
};

/// MultiVol of the rolled coamoeba: pi^{2n} times the mean fiber count over
/// uniform queries on the torus (R / pi Z)^{2n}.
VolumeEstimate multiVolCoamoeba(const PolySystem& system, std::uint64_t samples, std::uint64_t seed,
                                const MeasureConfig& cfg = {});

/// MultiVol of the amoeba restricted to `box` (a lower bound for the full value).
VolumeEstimate multiVolAmoebaBox(const PolySystem& system, const Box& box, std::uint64_t samples,
                                 std::uint64_t seed, const MeasureConfig& cfg = {});

/// Volume of the amoeba inside `box`.
VolumeEstimate amoebaVolumeBox(const PolySystem& system, const Box& box, Sampling sampling, std::uint64_t seed,
                               const MeasureConfig& cfg = {});

struct MultiHarnackReport {
    bool multiHarnack = false;
    double estimate = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    std::uint64_t alpha = 0;
    VolumeEstimate coamoeba;
};

/// |estimate - pi^{2n} alpha| <= tol * pi^{2n} alpha.
bool multiHarnackDecision(double estimate, std::uint64_t alpha, std::size_t numVars, double tol);

MultiHarnackReport multiHarnackCheck(const PolySystem& system, double tol, std::uint64_t samples,
                                     std::uint64_t seed, const MeasureConfig& cfg = {});

} // namespace amoebakit
