#include <doctest.h>

#include <set>

#include "amoebakit/verify.hpp"
#include "support/oracles.hpp"

using namespace amoebakit;

namespace {

const std::vector<std::string> kXY = {"x", "y"};

VerifyConfig quick() {
    VerifyConfig cfg;
    cfg.fiberSamples = 100;
    cfg.minQueries = 50;
    cfg.coamoebaSamples = 2000;
    cfg.volumeSamples = 4000;
    return cfg;
}

void requireBattery(const VerificationReport& r) {
    REQUIRE(r.checks.size() == batteryCheckNames().size());
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        CHECK(r.checks[i].name == batteryCheckNames()[i]);
        if (r.checks[i].status == CheckStatus::Skipped) CHECK_FALSE(r.checks[i].notes.empty());
    }
}

} // namespace

TEST_SUITE("verify") {

TEST_CASE("battery names are unique") {
    const auto& names = batteryCheckNames();
    CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
}

TEST_CASE("the line passes everything") {
    const PolySystem line({parse("1 + x + y", kXY)}, kXY);
    const auto r = verifySystem(line, quick());
    requireBattery(r);
    for (const auto& c : r.checks) CHECK_MESSAGE((c.status == CheckStatus::Pass), c.name << ": " << c.notes);
    CHECK(r.degrees == Degrees{1, 2});
    CHECK(r.multiHarnack);
    const auto j = toJson(r);
    CHECK(j["schemaVersion"] == 1);
    CHECK(j["checks"].size() == batteryCheckNames().size());
    CHECK(j["timings"].empty());
}

TEST_CASE("random cubic bounds and parity") {
    SplitMix64 rng(mixSeed(41, 1));
    const PolySystem cubic({oracle::randomCurve(rng, 3)}, kXY);
    auto cfg = quick();
    cfg.coamoebaSamples = 500;
    cfg.volumeSamples = 1000;
    const auto r = verifySystem(cubic, cfg);
    requireBattery(r);
    CHECK(r.degrees == Degrees{9, 18});
    for (const char* name : {"coamoeba_fiber_bound", "coamoeba_fiber_parity", "amoeba_fiber_bound",
                             "amoeba_fiber_parity", "amoeba_signed_count", "inclusion_residuals", "omega_vanishing"}) {
        CHECK_MESSAGE((r.check(name).status == CheckStatus::Pass), name);
    }
}

TEST_CASE("reports are reproducible") {
    SplitMix64 rng(mixSeed(41, 2));
    const PolySystem conic({oracle::randomCurve(rng, 2)}, kXY);
    auto cfg = quick();
    cfg.fiberSamples = 60;
    cfg.coamoebaSamples = 300;
    cfg.volumeSamples = 300;
    const auto a = toJson(verifySystem(conic, cfg));
    cfg.threads = 2;
    const auto b = toJson(verifySystem(conic, cfg));
    CHECK(a == b);
}

TEST_CASE("too few queries fail instead of passing vacuously") {
    const PolySystem line({parse("1 + x + y", kXY)}, kXY);
    auto cfg = quick();
    cfg.fiberSamples = 10;
    cfg.coamoebaSamples = 100;
    cfg.volumeSamples = 100;
    const auto r = verifySystem(line, cfg);
    CHECK((r.check("coamoeba_fiber_bound").status == CheckStatus::Fail));
    CHECK(r.check("coamoeba_fiber_bound").samples == 10);
    CHECK_FALSE(r.allPassed());
}

TEST_CASE("two linear equations in four variables") {
    SplitMix64 rng(mixSeed(41, 3));
    const PolySystem plane(oracle::randomLinearSystem(rng, 2), defaultVarNames(4));
    VerifyConfig cfg;
    cfg.fiberSamples = 50;
    cfg.minQueries = 40;
    cfg.coamoebaSamples = 100;
    cfg.volumeSamples = 100;
    cfg.boxHalfWidth = 4;
    cfg.recordTimings = true;
    const auto r = verifySystem(plane, cfg);
    requireBattery(r);
    CHECK(r.degrees == Degrees{1, 6});
    CHECK((r.check("coamoeba_fiber_bound").status == CheckStatus::Pass));
    CHECK((r.check("amoeba_fiber_bound").status == CheckStatus::Pass));
    CHECK((r.check("oracle_agreement").status == CheckStatus::Skipped));
    CHECK(r.timings.size() == batteryCheckNames().size());
}

} // TEST_SUITE
