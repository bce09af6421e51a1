#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "amoebakit/fibers.hpp"
#include "amoebakit/laurent.hpp"
#include "amoebakit/measure.hpp"
#include "amoebakit/polytope.hpp"

namespace amoebakit {

/// System file: a `vars: x, y, ...` line followed by `f1: <poly>`, `f2: ...`
/// lines. Blank lines and `#` comments are ignored. Parse errors carry the
/// line and column within the file.
PolySystem parseSystemFile(std::string_view text, const ParseLimits& limits = {});
std::string formatSystemFile(const PolySystem& system);

/// Canonical JSON: {"vars":[...],"polys":[{"terms":[{"exp":[...],"re":r,"im":i}]}]}.
nlohmann::json toJson(const PolySystem& system);
PolySystem systemFromJson(const nlohmann::json& doc, const ParseLimits& limits = {});

/// Reads either format; JSON is recognized by a leading '{'.
PolySystem parseSystemText(std::string_view text, const ParseLimits& limits = {});

nlohmann::json toJson(const Degrees& degrees);
nlohmann::json toJson(const LatticePolytope& polytope);
nlohmann::json toJson(const LogPolarPoint& point);
nlohmann::json toJson(const FiberReport& report);
nlohmann::json toJson(const VolumeEstimate& estimate);
nlohmann::json toJson(const MultiHarnackReport& report);

} // namespace amoebakit
