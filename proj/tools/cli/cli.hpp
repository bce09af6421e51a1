#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amoebakit/fibers.hpp"
#include "amoebakit/measure.hpp"

namespace amoebakit::cli {

inline constexpr std::size_t kMaxResolution = 4096;
inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Fiber counts at pixel centres, row 0 at the top (largest second coordinate).
struct RasterImage {
    std::size_t width = 0;
    std::size_t height = 0;
    FiberSpace space = FiberSpace::Amoeba;
    Box box;
    std::vector<std::uint8_t> values;
    /// Pixels whose query was non-generic for the exact oracle and were
    /// counted by multistart instead.
    std::size_t fallbackPixels = 0;
};

/// Curves only (n = 1); at most kMaxResolution pixels per axis.
RasterImage renderRaster(const PolySystem& system, FiberSpace space, const Box& box, std::size_t width,
                         std::size_t height, const SolverConfig& cfg = {}, std::size_t threads = 1);

/// Plain PGM (P2) with the count as gray level.
std::string toPgm(const RasterImage& image);
nlohmann::json toJson(const RasterImage& image);

/// Runs one subcommand; args excludes the program name. Returns 0 on
/// success, 1 on computation errors and 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace amoebakit::cli
