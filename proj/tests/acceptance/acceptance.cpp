// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "amoebakit/error.hpp"
#include "amoebakit/io.hpp"
#include "amoebakit/measure.hpp"
#include "amoebakit/parallel.hpp"
#include "amoebakit/polytope.hpp"
#include "support/oracles.hpp"

using namespace amoebakit;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<std::string> kXY = {"x", "y"};

struct Outcome {
    bool pass = false;
    std::string detail;
};

PolySystem lineSystem() {
    return PolySystem({parse("1 + x + y", kXY)}, kXY);
}

PolySystem curveSystem(int degree) {
    SplitMix64 rng(mixSeed(2024, static_cast<std::uint64_t>(degree)));
    return PolySystem({oracle::randomCurve(rng, degree)}, kXY);
}

PolySystem planeSystem(std::uint64_t seed) {
    SplitMix64 rng(seed);
    return PolySystem(oracle::randomLinearSystem(rng, 2), defaultVarNames(4));
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// --- 1 ---------------------------------------------------------------------------

Outcome degreesExact() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, bool>> cases;
    cases.emplace_back("line", alphaBeta(lineSystem()) == Degrees{1, 2});
    cases.emplace_back("conic", alphaBeta(curveSystem(2)) == Degrees{4, 8});
    cases.emplace_back("cubic", alphaBeta(curveSystem(3)) == Degrees{9, 18});
    // Standard simplices in Z^4: 1 + z1 + z2 + z3 + z4 with generic coefficients.
    cases.emplace_back("n=2 simplices", alphaBeta(planeSystem(mixSeed(2024, 40))) == Degrees{1, 6});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Outcome o;
    o.pass = seconds < 30.0;
    for (const auto& [name, ok] : cases) {
        o.pass &= ok;
        if (!ok) o.detail += name + " wrong; ";
    }
    o.detail += "(1,2) (4,8) (9,18) (1,6) in " + fmt(seconds) + " s";
    return o;
}

// --- 2 ---------------------------------------------------------------------------

struct LineVolumes {
    VolumeEstimate area;
    VolumeEstimate torus;
};

LineVolumes lineVolumes(std::size_t threads) {
    MeasureConfig cfg;
    cfg.threads = threads;
    return {amoebaVolumeBox(lineSystem(), Box::cube(2, 10), Sampling::grid(600), 2024, cfg),
            multiVolCoamoeba(lineSystem(), 100000, 2024, cfg)};
}

Outcome lineVolumeCriterion(const LineVolumes& v, double seconds) {
    const double half = kPi * kPi / 2;
    const double full = kPi * kPi;
    const bool areaOk = std::abs(v.area.value - half) <= 0.03 * half;
    const bool torusOk = std::abs(v.torus.value - full) <= 3 * v.torus.stdError + 1e-12 &&
                         std::abs(v.torus.value - full) <= 0.02 * full;
    return {areaOk && torusOk && seconds < 120.0,
            "Vol(A) grid 600^2 = " + fmt(v.area.value) + " (pi^2/2 = " + fmt(half) + "), MultiVol(B) 1e5 = " +
                fmt(v.torus.value) + " +- " + fmt(v.torus.stdError) + ", " + fmt(seconds) + " s"};
}

// --- 3, 4, 6, 9 ---------------------------------------------------------------------

struct QuerySet {
    std::vector<FiberReport> reports;
    std::uint64_t resampled = 0;
};

std::vector<double> amoebaQuery(const PolySystem& sys, SplitMix64& rng, std::size_t index) {
    if (index % 2 == 1) {
        std::vector<double> q{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        std::vector<double> t{rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi)};
        if (auto z = projectToVariety(sys, LogPolarPoint(q, t))) return z->q();
    }
    return {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
}

/// 500 regular exact fibers, non-regular queries redrawn from a derived seed.
QuerySet exactFibers(const PolySystem& sys, FiberSpace space, std::uint64_t seed, std::size_t threads) {
    constexpr std::size_t kQueries = 500;
    std::vector<std::optional<FiberReport>> slots(kQueries);
    std::vector<std::uint64_t> redraws(kQueries, 0);
    parallelFor(kQueries, threads, [&](std::size_t i) {
        for (std::uint64_t attempt = 0; attempt <= 16; ++attempt) {
            SplitMix64 rng(mixSeed(mixSeed(seed, i), attempt));
            const auto query = space == FiberSpace::Amoeba
                                   ? amoebaQuery(sys, rng, i)
                                   : std::vector<double>{rng.uniform(0, kPi), rng.uniform(0, kPi)};
            try {
                auto r = curveFiberExact(sys, space, query);
                if (r.regular) {
                    slots[i] = std::move(r);
                    return;
                }
            } catch (const NonGenericQuery&) {
            }
            ++redraws[i];
        }
    });
    QuerySet set;
    for (std::size_t i = 0; i < kQueries; ++i) {
        if (slots[i]) set.reports.push_back(std::move(*slots[i]));
        set.resampled += redraws[i];
    }
    return set;
}

struct CurveCase {
    std::string name;
    PolySystem system;
    Degrees degrees;
    QuerySet amoeba;
    QuerySet coamoeba;
};

std::vector<CurveCase> curveCases(std::size_t threads) {
    std::vector<CurveCase> cases;
    std::uint64_t tag = 0;
    for (auto& [name, sys] : std::vector<std::pair<std::string, PolySystem>>{
             {"line", lineSystem()}, {"conic", curveSystem(2)}, {"cubic", curveSystem(3)}}) {
        ++tag;
        CurveCase c{name, sys, alphaBeta(sys), {}, {}};
        c.amoeba = exactFibers(sys, FiberSpace::Amoeba, mixSeed(3, tag), threads);
        c.coamoeba = exactFibers(sys, FiberSpace::Coamoeba, mixSeed(4, tag), threads);
        cases.push_back(std::move(c));
    }
    return cases;
}

Outcome boundsAndParity(const std::vector<CurveCase>& cases) {
    Outcome o{true, ""};
    for (const auto& c : cases) {
        std::size_t violations = 0;
        for (const auto& r : c.coamoeba.reports) {
            if (r.count > c.degrees.alpha || r.count % 2 != c.degrees.alpha % 2) ++violations;
        }
        for (const auto& r : c.amoeba.reports) {
            if (r.count > c.degrees.beta || r.count % 2 != 0 || r.signedCount != 0) ++violations;
        }
        const bool full = c.amoeba.reports.size() == 500 && c.coamoeba.reports.size() == 500;
        o.pass &= violations == 0 && full;
        o.detail += c.name + ": " + std::to_string(violations) + " violations over " +
                    std::to_string(c.amoeba.reports.size()) + "+" + std::to_string(c.coamoeba.reports.size()) +
                    " queries; ";
    }
    return o;
}

Outcome inclusionResiduals(const std::vector<CurveCase>& cases) {
    const double bound = 10 * SolverConfig{}.tol;
    std::size_t points = 0;
    std::size_t bad = 0;
    double worst = 0.0;
    for (const auto& c : cases) {
        for (const auto* set : {&c.amoeba, &c.coamoeba}) {
            for (const auto& r : set->reports) {
                for (const auto& s : r.solutions) {
                    const double res = enclosingResidual(c.system, r.space, r.query, s.point);
                    worst = std::max(worst, res);
                    bad += res > bound ? 1 : 0;
                    ++points;
                }
            }
        }
    }
    return {bad == 0 && points > 0,
            std::to_string(points) + " fiber points, max residual " + fmt(worst) + ", bound " + fmt(bound)};
}

Outcome oracleEquivalence(const std::vector<CurveCase>& cases) {
    Outcome o{true, ""};
    for (const auto& c : cases) {
        for (const auto* set : {&c.amoeba, &c.coamoeba}) {
            std::size_t agree = 0;
            std::size_t over = 0;
            for (const auto& r : set->reports) {
                const auto multi = r.space == FiberSpace::Amoeba ? amoebaFiber(c.system, r.query, {}, c.degrees)
                                                                 : coamoebaFiber(c.system, r.query, {}, c.degrees);
                agree += multi.count == r.count ? 1 : 0;
                over += multi.count > r.count ? 1 : 0;
            }
            const double rate = static_cast<double>(agree) / static_cast<double>(set->reports.size());
            o.pass &= rate >= 0.99 && over == 0 && set->reports.size() == 500;
            const auto space = set->reports.empty() ? std::string("?") : toString(set->reports[0].space);
            o.detail += c.name + "/" + space + " " + fmt(100 * rate) + "% (" + std::to_string(over) + " over); ";
        }
    }
    return o;
}

std::string dumpCases(const std::vector<CurveCase>& cases) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& c : cases) {
        for (const auto* set : {&c.amoeba, &c.coamoeba}) {
            for (const auto& r : set->reports) all.push_back(toJson(r));
        }
    }
    return all.dump();
}

// --- 5 ---------------------------------------------------------------------------

Outcome omegaVanishing() {
    SplitMix64 rng(mixSeed(2024, 50));
    std::vector<PolySystem> systems;
    for (int i = 0; i < 10; ++i) systems.push_back(curveSystem(100 + i % 3 + 2 * i));
    for (int i = 0; i < 3; ++i) systems.push_back(planeSystem(mixSeed(2024, 60 + static_cast<std::uint64_t>(i))));

    double worst = 0.0;
    std::size_t points = 0;
    while (points < 1000) {
        const auto& sys = systems[points % systems.size()];
        std::vector<double> q(sys.numVars());
        std::vector<double> t(sys.numVars());
        for (auto& v : q) v = rng.uniform(-1.0, 1.0);
        for (auto& v : t) v = rng.uniform(0, 2 * kPi);
        const auto z = projectToVariety(sys, LogPolarPoint(q, t));
        if (!z) continue;
        try {
            worst = std::max(worst, omegaResidual(sys, *z));
            ++points;
        } catch (const SingularPoint&) {
        }
    }

    // Control: tilt the second real direction out of the complex tangent line.
    double control = 1e300;
    const auto line = lineSystem();
    for (int i = 0; i < 20; ++i) {
        const auto z = projectToVariety(line, LogPolarPoint({rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                                            {rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi)}));
        if (!z) continue;
        auto frame = realFrame(tangentBasis(line, *z));
        for (auto& v : frame[1]) v += 0.5 * std::conj(v);
        control = std::min(control, omegaOfFrame(frame));
    }
    return {worst < 1e-8 && control > 1e-4,
            "max residual " + fmt(worst) + " over " + std::to_string(points) + " points; control min " + fmt(control)};
}

// --- 7 ---------------------------------------------------------------------------

Outcome mixedVolumeProperties() {
    SplitMix64 rng(mixSeed(2024, 70));
    std::size_t failures = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 2 + static_cast<std::size_t>(trial % 3);
        std::vector<LatticePolytope> tuple;
        for (std::size_t k = 0; k < dim; ++k) {
            tuple.push_back(convexHull(oracle::randomPoints(rng, dim, dim + 1 + rng.next() % 3, 2)));
        }
        const auto mv = mixedVolume(tuple);
        auto perm = tuple;
        std::reverse(perm.begin(), perm.end());
        std::rotate(perm.begin(), perm.begin() + 1, perm.end());
        auto moved = tuple;
        for (auto& p : moved) {
            LatticePoint shift(dim);
            for (auto& s : shift) s = static_cast<std::int64_t>(rng.next() % 7) - 3;
            p = translateBy(p, shift);
        }
        const std::vector<LatticePolytope> diag(dim, tuple[0]);
        if (mixedVolume(perm) != mv) ++failures;
        if (mixedVolume(moved) != mv) ++failures;
        if (mixedVolume(diag) != normalizedVolume(tuple[0])) ++failures;
        if (normalizedVolume(tuple[0]) != oracle::bruteNormalizedVolume(tuple[0].vertices())) ++failures;
    }
    return {failures == 0, "50 tuples in dimensions 2-4, " + std::to_string(failures) + " failures"};
}

// --- 8 ---------------------------------------------------------------------------

struct PlaneVolumes {
    VolumeEstimate volume;
    VolumeEstimate torus;
};

PlaneVolumes planeVolumes(std::size_t threads) {
    const auto plane = planeSystem(mixSeed(2024, 80));
    MeasureConfig cfg;
    cfg.threads = threads;
    return {amoebaVolumeBox(plane, Box::cube(4, 8), Sampling::monteCarlo(20000), 2025, cfg),
            multiVolCoamoeba(plane, 1500, 2025, cfg)};
}

Outcome planeCriterion(const PlaneVolumes& v, double seconds) {
    const double pi4 = std::pow(kPi, 4);
    const double lower = pi4 * 4.0 / 576.0;
    const double upper = pi4 / 2.0;
    const double slack = 3 * v.volume.stdError;
    const bool bracket = v.volume.value + slack >= lower && v.volume.value - slack <= upper;
    const bool torus = std::abs(v.torus.value - pi4) <= 0.05 * pi4;
    return {bracket && torus && seconds < 900.0,
            "Vol(A in [-8,8]^4) = " + fmt(v.volume.value) + " +- " + fmt(v.volume.stdError) + " in [" + fmt(lower) +
                ", " + fmt(upper) + "]; MultiVol(B) = " + fmt(v.torus.value) + " (pi^4 = " + fmt(pi4) +
                "), non-regular rate " + fmt(v.torus.nonRegularRate) + ", " + fmt(seconds) + " s"};
}

// ---------------------------------------------------------------------------------

template <class Fn>
auto timed(Fn&& fn, double& seconds) {
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace

int main() {
    int failed = 0;
    auto report = [&](int id, const std::string& name, const Outcome& o) {
        std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    };
    auto guarded = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
        try {
            report(id, name, fn());
        } catch (const std::exception& e) {
            report(id, name, {false, std::string("error: ") + e.what()});
        }
    };

    guarded(1, "degrees", degreesExact);

    std::optional<LineVolumes> line;
    guarded(2, "line volumes", [&] {
        double seconds = 0;
        line = timed([] { return lineVolumes(1); }, seconds);
        return lineVolumeCriterion(*line, seconds);
    });

    std::vector<CurveCase> cases;
    guarded(3, "fiber bounds and parity", [&] {
        cases = curveCases(1);
        return boundsAndParity(cases);
    });
    guarded(4, "inclusion residuals", [&] { return inclusionResiduals(cases); });
    guarded(5, "omega vanishing", omegaVanishing);
    guarded(6, "oracle equivalence", [&] { return oracleEquivalence(cases); });
    guarded(7, "mixed volume properties", mixedVolumeProperties);

    std::optional<PlaneVolumes> plane;
    guarded(8, "n=2 linear space volumes", [&] {
        double seconds = 0;
        plane = timed([] { return planeVolumes(1); }, seconds);
        return planeCriterion(*plane, seconds);
    });

    guarded(9, "determinism across thread counts", [&]() -> Outcome {
        if (!line || !plane || cases.empty()) return {false, "earlier criteria did not produce outputs"};
        const auto line3 = lineVolumes(3);
        const bool c2 = toJson(line->area) == toJson(line3.area) && toJson(line->torus) == toJson(line3.torus);
        const bool c3 = dumpCases(cases) == dumpCases(curveCases(3));
        const auto plane3 = planeVolumes(3);
        const bool c8 = toJson(plane->volume) == toJson(plane3.volume) && toJson(plane->torus) == toJson(plane3.torus);
        return {c2 && c3 && c8, std::string("criterion 2 ") + (c2 ? "identical" : "differs") + ", criterion 3 " +
                                    (c3 ? "identical" : "differs") + ", criterion 8 " + (c8 ? "identical" : "differs") +
                                    " (1 vs 3 threads)"};
    });

    std::printf("%d of 9 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
