#include "amoebakit/measure.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "amoebakit/error.hpp"
#include "amoebakit/rng.hpp"
#include "amoebakit/parallel.hpp"

namespace amoebakit {

namespace {

constexpr double kPi = std::numbers::pi;

struct SampleOutcome {
    double value = 0.0;
    std::uint64_t nonRegular = 0;
    bool unresolved = false;
};

/// Fiber count at a query, or nullopt when the query is not a regular value.
std::optional<std::size_t> countAt(const PolySystem& system, FiberSpace space, std::span<const double> query,
                                   const SolverConfig& cfg, const Degrees& degrees) {
    if (space == FiberSpace::Amoeba && dominantTermExcludes(system, query)) return 0;
    try {
        const FiberReport report = fiber(system, space, query, cfg, degrees);
        if (!report.regular) return std::nullopt;
        return report.count;
    } catch (const NonGenericQuery&) {
        return std::nullopt;
    }
}

/// Draws queries for sample `index` until one is regular, at most
/// 1 + maxResamples attempts. `draw` fills a query from a generator.
template <class Draw, class Score>
SampleOutcome sampleIndex(std::uint64_t master, std::size_t index, std::size_t maxResamples, Draw&& draw,
                          Score&& score) {
    SampleOutcome out;
    const std::uint64_t base = mixSeed(master, index);
    for (std::size_t attempt = 0; attempt <= maxResamples; ++attempt) {
        SplitMix64 rng(attempt == 0 ? base : mixSeed(base, attempt));
        const std::vector<double> query = draw(rng);
        if (auto value = score(query)) {
            out.value = *value;
            return out;
        }
        ++out.nonRegular;
    }
    // Still non-regular after the cap: keep the last draw's raw count.
    out.unresolved = true;
    SplitMix64 rng(mixSeed(base, maxResamples));
    out.value = score(draw(rng), true).value_or(0.0);
    return out;
}

/// Mean and standard error accumulated in index order.
void summarize(const std::vector<SampleOutcome>& outcomes, double scale, VolumeEstimate& est) {
    const auto count = static_cast<double>(outcomes.size());
    double sum = 0.0;
    for (const auto& o : outcomes) sum += o.value;
    const double mean = sum / count;
    double sq = 0.0;
    for (const auto& o : outcomes) sq += (o.value - mean) * (o.value - mean);
    const double sd = outcomes.size() > 1 ? std::sqrt(sq / (count - 1.0)) : 0.0;
    est.value = scale * mean;
    est.stdError = scale * sd / std::sqrt(count);
    est.samples = outcomes.size();

    std::uint64_t attempts = 0;
    for (const auto& o : outcomes) {
        est.nonRegular += o.nonRegular;
        est.unresolved += o.unresolved ? 1 : 0;
        attempts += o.nonRegular + (o.unresolved ? 0 : 1);
    }
    est.nonRegularRate = attempts ? static_cast<double>(est.nonRegular) / static_cast<double>(attempts) : 0.0;
    est.warning = est.nonRegularRate > 0.01;
}

void requireSamples(std::uint64_t samples) {
    if (samples == 0) throw InvalidArgument("samples must be at least 1");
}

void requireBox(const PolySystem& system, const Box& box) {
    if (box.sides.size() != system.numVars()) {
        throw DimensionMismatch("DimensionMismatch: box needs " + std::to_string(system.numVars()) +
                                " intervals, got " + std::to_string(box.sides.size()));
    }
    for (const auto& [lo, hi] : box.sides) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
            throw InvalidArgument("box intervals must be finite with lo <= hi");
        }
    }
}

/// Scores a query as the fiber count (or 0/1 membership) in `space`.
auto makeScore(const PolySystem& system, FiberSpace space, const SolverConfig& cfg, const Degrees& degrees,
               bool indicator) {
    return [&system, space, &cfg, degrees, indicator](std::span<const double> query,
                                                      bool force = false) -> std::optional<double> {
        std::optional<std::size_t> count = countAt(system, space, query, cfg, degrees);
        if (!count && force) {
            // Raw count regardless of regularity.
            try {
                count = fiber(system, space, query, cfg, degrees).count;
            } catch (const NonGenericQuery&) {
                count = 0;
            }
        }
        if (!count) return std::nullopt;
        if (indicator) return *count > 0 ? 1.0 : 0.0;
        return static_cast<double>(*count);
    };
}

VolumeEstimate boxEstimate(const PolySystem& system, const Box& box, std::uint64_t samples, std::uint64_t seed,
                           const MeasureConfig& cfg, VolumeKind kind) {
    requireSamples(samples);
    requireBox(system, box);
    VolumeEstimate est;
    est.kind = kind;
    est.seed = seed;
    est.domain = box.describe();
    est.truncated = true;
    const double volume = box.volume();
    if (volume == 0.0) {
        est.samples = samples;
        return est;
    }
    const Degrees degrees = alphaBeta(system);
    const auto score = makeScore(system, FiberSpace::Amoeba, cfg.solver, degrees, kind == VolumeKind::VolA);
    const auto draw = [&box](SplitMix64& rng) {
        std::vector<double> q;
        q.reserve(box.sides.size());
        for (const auto& [lo, hi] : box.sides) q.push_back(rng.uniform(lo, hi));
        return q;
    };
    std::vector<SampleOutcome> outcomes(samples);
    parallelFor(samples, cfg.threads, [&](std::size_t i) {
        outcomes[i] = sampleIndex(seed, i, cfg.maxResamples, draw, score);
    });
    summarize(outcomes, volume, est);
    return est;
}

} // namespace

std::string toString(VolumeKind kind) {
    switch (kind) {
    case VolumeKind::VolA: return "volA";
    case VolumeKind::MultiVolA: return "multiVolA";
    case VolumeKind::MultiVolB: return "multiVolB";
    }
    return "unknown";
}

Box Box::cube(std::size_t dim, double halfWidth) {
    return Box{std::vector<std::pair<double, double>>(dim, {-halfWidth, halfWidth})};
}

double Box::volume() const {
    double v = 1.0;
    for (const auto& [lo, hi] : sides) v *= hi - lo;
    return v;
}

std::string Box::describe() const {
    std::ostringstream out;
    out.precision(17);
    out << "box ";
    for (std::size_t k = 0; k < sides.size(); ++k) {
        if (k) out << " x ";
        out << '[' << sides[k].first << ", " << sides[k].second << ']';
    }
    return out.str();
}

VolumeEstimate multiVolCoamoeba(const PolySystem& system, std::uint64_t samples, std::uint64_t seed,
                                const MeasureConfig& cfg) {
    requireSamples(samples);
    const std::size_t dim = system.numVars();
    VolumeEstimate est;
    est.kind = VolumeKind::MultiVolB;
    est.seed = seed;
    est.domain = "torus [0, pi)^" + std::to_string(dim);
    est.truncated = false;

    const Degrees degrees = alphaBeta(system);
    const auto score = makeScore(system, FiberSpace::Coamoeba, cfg.solver, degrees, false);
    const auto draw = [dim](SplitMix64& rng) {
        std::vector<double> p(dim);
        for (auto& v : p) v = rng.uniform(0.0, kPi);
        return p;
    };
    std::vector<SampleOutcome> outcomes(samples);
    parallelFor(samples, cfg.threads, [&](std::size_t i) {
        outcomes[i] = sampleIndex(seed, i, cfg.maxResamples, draw, score);
    });
    summarize(outcomes, std::pow(kPi, static_cast<double>(dim)), est);
    return est;
}

VolumeEstimate multiVolAmoebaBox(const PolySystem& system, const Box& box, std::uint64_t samples,
                                 std::uint64_t seed, const MeasureConfig& cfg) {
    return boxEstimate(system, box, samples, seed, cfg, VolumeKind::MultiVolA);
}

VolumeEstimate amoebaVolumeBox(const PolySystem& system, const Box& box, Sampling sampling, std::uint64_t seed,
                               const MeasureConfig& cfg) {
    if (sampling.mode == Sampling::Mode::MonteCarlo) {
        return boxEstimate(system, box, sampling.count, seed, cfg, VolumeKind::VolA);
    }

    requireSamples(sampling.count);
    requireBox(system, box);
    const std::size_t dim = system.numVars();
    const std::uint64_t perAxis = sampling.count;
    const double cellsF = std::pow(static_cast<double>(perAxis), static_cast<double>(dim));
    if (cellsF > 1e9) throw InvalidArgument("grid has more than 1e9 cells");
    const auto cells = static_cast<std::size_t>(cellsF);

    VolumeEstimate est;
    est.kind = VolumeKind::VolA;
    est.seed = seed;
    est.domain = box.describe() + ", grid " + std::to_string(perAxis) + "^" + std::to_string(dim);
    est.truncated = true;
    const double volume = box.volume();
    if (volume == 0.0) {
        est.samples = cells;
        return est;
    }

    const Degrees degrees = alphaBeta(system);
    const auto score = makeScore(system, FiberSpace::Amoeba, cfg.solver, degrees, true);
    // Cell centre first; a non-regular centre is replaced by a seeded point
    // inside the same cell.
    std::vector<SampleOutcome> outcomes(cells);
    parallelFor(cells, cfg.threads, [&](std::size_t index) {
        std::vector<std::size_t> cell(dim);
        std::size_t rest = index;
        for (std::size_t k = 0; k < dim; ++k) {
            cell[k] = rest % perAxis;
            rest /= perAxis;
        }
        std::size_t call = 0;
        const auto draw = [&](SplitMix64& rng) {
            std::vector<double> q(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                const auto [lo, hi] = box.sides[k];
                const double offset = call == 0 ? 0.5 : rng.uniform();
                q[k] = lo + (hi - lo) * (static_cast<double>(cell[k]) + offset) / static_cast<double>(perAxis);
            }
            ++call;
            return q;
        };
        outcomes[index] = sampleIndex(seed, index, cfg.maxResamples, draw, score);
    });
    summarize(outcomes, volume, est);
    // A grid is not a random sample; report the binomial error of an equally
    // sized Monte Carlo run as the scale of the discretization error.
    const double fraction = est.value / volume;
    est.stdError = volume * std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(cells));
    return est;
}

bool multiHarnackDecision(double estimate, std::uint64_t alpha, std::size_t numVars, double tol) {
    const double target = std::pow(kPi, static_cast<double>(numVars)) * static_cast<double>(alpha);
    return std::abs(estimate - target) <= tol * target;
}

MultiHarnackReport multiHarnackCheck(const PolySystem& system, double tol, std::uint64_t samples,
                                     std::uint64_t seed, const MeasureConfig& cfg) {
    const Degrees degrees = alphaBeta(system);
    if (degrees.alpha < 1) throw InvalidArgument("multiHarnack test needs alpha >= 1");
    if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");
    MultiHarnackReport report;
    report.alpha = degrees.alpha;
    report.tolerance = tol;
    report.target = std::pow(kPi, static_cast<double>(system.numVars())) * static_cast<double>(degrees.alpha);
    report.coamoeba = multiVolCoamoeba(system, samples, seed, cfg);
    report.estimate = report.coamoeba.value;
    report.multiHarnack = multiHarnackDecision(report.estimate, degrees.alpha, system.numVars(), tol);
    return report;
}

} // namespace amoebakit
