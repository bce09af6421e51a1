#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amoebakit/fibers.hpp"
#include "amoebakit/measure.hpp"

namespace amoebakit {

enum class CheckStatus { Pass, Fail, Skipped };

std::string toString(CheckStatus status);

struct CheckRecord {
    std::string name;
    CheckStatus status = CheckStatus::Skipped;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    std::uint64_t samples = 0;
    std::string notes;
    /// A violation that does not fail the battery (parity for n >= 2).
    bool warning = false;
};

struct VerifyConfig {
    SolverConfig solver;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    /// Regular random queries per fiber space.
    std::size_t fiberSamples = 200;
    /// Checks backed by fewer regular queries than this fail.
    std::size_t minQueries = 50;
    /// Smooth points at which the form omega is evaluated.
    std::size_t omegaSamples = 200;
    std::uint64_t coamoebaSamples = 20000;
    std::uint64_t volumeSamples = 20000;
    double boxHalfWidth = 10.0;
    double multiHarnackTol = 0.05;
    bool recordTimings = false;
};

struct VerificationReport {
    static constexpr int kSchemaVersion = 1;

    nlohmann::json system;
    Degrees degrees;
    std::vector<CheckRecord> checks;
    std::uint64_t seed = 0;
    bool multiHarnack = false;
    /// Wall-clock seconds per check; empty unless cfg.recordTimings.
    std::map<std::string, double> timings;

    bool allPassed() const;
    const CheckRecord& check(const std::string& name) const;
};

/// Names of the battery in report order.
const std::vector<std::string>& batteryCheckNames();

VerificationReport verifySystem(const PolySystem& system, const VerifyConfig& cfg = {});

nlohmann::json toJson(const CheckRecord& record);
nlohmann::json toJson(const VerificationReport& report);

} // namespace amoebakit
