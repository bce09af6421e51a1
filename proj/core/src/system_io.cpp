#include "amoebakit/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "amoebakit/error.hpp"

namespace amoebakit {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool isIdentifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

std::size_t columnOf(std::string_view line, std::string_view part) {
    return static_cast<std::size_t>(part.data() - line.data()) + 1;
}

} // namespace

PolySystem parseSystemFile(std::string_view text, const ParseLimits& limits) {
    std::optional<std::vector<std::string>> vars;
    std::map<std::size_t, LaurentPolynomial> polys;
    std::size_t lineNo = 0;
    std::size_t varsLine = 0;

    while (!text.empty()) {
        ++lineNo;
        const auto eol = text.find('\n');
        const std::string_view raw = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;

        const auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError("expected 'vars:' or 'f<k>:' declaration", lineNo, columnOf(raw, trim(line)));
        }
        const std::string_view key = trim(line.substr(0, colon));
        const std::string_view body = line.substr(colon + 1);

        if (key == "vars") {
            if (vars) throw ParseError("duplicate 'vars:' line", lineNo, columnOf(raw, key));
            vars.emplace();
            std::string_view rest = body;
            while (true) {
                const auto comma = rest.find(',');
                const std::string_view name = trim(rest.substr(0, comma));
                if (!isIdentifier(name)) {
                    throw ParseError("invalid variable name '" + std::string(name) + "'", lineNo,
                                     columnOf(raw, name.empty() ? rest : name));
                }
                vars->emplace_back(name);
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
            varsLine = lineNo;
            continue;
        }

        if (key.size() < 2 || key[0] != 'f') {
            throw ParseError("unknown declaration '" + std::string(key) + "'", lineNo, columnOf(raw, key));
        }
        std::size_t index = 0;
        const auto [end, ec] = std::from_chars(key.data() + 1, key.data() + key.size(), index);
        if (ec != std::errc() || end != key.data() + key.size() || index == 0) {
            throw ParseError("polynomial label must be f1, f2, ...", lineNo, columnOf(raw, key));
        }
        if (!vars) throw ParseError("'vars:' must precede the polynomials", lineNo, columnOf(raw, key));
        if (polys.count(index)) {
            throw ParseError("duplicate label '" + std::string(key) + "'", lineNo, columnOf(raw, key));
        }
        try {
            polys.emplace(index, parse(body, vars, limits, lineNo));
        } catch (const ParseError& e) {
            // Shift the column from the polynomial body to the file line.
            throw ParseError(std::string(e.what()).substr(std::string(e.what()).find(": ") + 2), lineNo,
                             e.column() + static_cast<std::size_t>(body.data() - raw.data()));
        }
    }

    if (!vars) throw ParseError("missing 'vars:' line", lineNo == 0 ? 1 : lineNo, 1);
    if (polys.empty()) throw ParseError("no polynomials given", varsLine, 1);
    std::vector<LaurentPolynomial> list;
    std::size_t expected = 1;
    for (auto& [index, f] : polys) {
        if (index != expected) {
            throw ParseError("polynomial labels must be consecutive from f1 (missing f" + std::to_string(expected) +
                                 ")",
                             varsLine, 1);
        }
        list.push_back(std::move(f));
        ++expected;
    }
    return PolySystem(std::move(list), *vars);
}

std::string formatSystemFile(const PolySystem& system) {
    std::string out = "vars: ";
    for (std::size_t k = 0; k < system.numVars(); ++k) {
        if (k) out += ", ";
        out += system.varNames()[k];
    }
    out += '\n';
    for (std::size_t j = 0; j < system.n(); ++j) {
        out += "f" + std::to_string(j + 1) + ": " + format(system.poly(j), system.varNames()) + '\n';
    }
    return out;
}

nlohmann::json toJson(const PolySystem& system) {
    nlohmann::json polys = nlohmann::json::array();
    for (const auto& f : system.polys()) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [exp, c] : f.terms()) {
            terms.push_back({{"exp", exp}, {"re", c.real()}, {"im", c.imag()}});
        }
        polys.push_back({{"terms", std::move(terms)}});
    }
    return {{"vars", system.varNames()}, {"polys", std::move(polys)}};
}

PolySystem systemFromJson(const nlohmann::json& doc, const ParseLimits& limits) {
    try {
        const auto vars = doc.at("vars").get<std::vector<std::string>>();
        for (const auto& v : vars) {
            if (!isIdentifier(v)) throw InvalidArgument("invalid variable name '" + v + "'");
        }
        std::vector<LaurentPolynomial> polys;
        for (const auto& p : doc.at("polys")) {
            LaurentPolynomial::TermMap terms;
            for (const auto& t : p.at("terms")) {
                auto exp = t.at("exp").get<ExponentVector>();
                const double re = t.at("re").get<double>();
                const double im = t.contains("im") ? t.at("im").get<double>() : 0.0;
                if (exp.size() != vars.size()) {
                    throw DimensionMismatch("DimensionMismatch: exponent vector length differs from vars");
                }
                for (int e : exp) {
                    if (std::abs(e) > limits.maxExponent) {
                        throw InvalidArgument("exponent " + std::to_string(e) + " out of range");
                    }
                }
                if (!std::isfinite(re) || !std::isfinite(im) || std::abs(Complex(re, im)) > limits.maxCoefficient) {
                    throw InvalidArgument("coefficient out of range");
                }
                terms[exp] += Complex(re, im);
            }
            polys.emplace_back(vars.size(), std::move(terms));
        }
        return PolySystem(std::move(polys), vars);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed system JSON: ") + e.what());
    }
}

PolySystem parseSystemText(std::string_view text, const ParseLimits& limits) {
    const std::string_view body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(body);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), 1, e.byte);
        }
        return systemFromJson(doc, limits);
    }
    return parseSystemFile(text, limits);
}

nlohmann::json toJson(const Degrees& degrees) {
    return {{"alpha", degrees.alpha}, {"beta", degrees.beta}};
}

nlohmann::json toJson(const LatticePolytope& polytope) {
    return {{"dim", polytope.dim()}, {"vertices", polytope.vertices()}};
}

nlohmann::json toJson(const LogPolarPoint& point) {
    return {{"q", point.q()}, {"theta", point.theta()}};
}

nlohmann::json toJson(const FiberReport& report) {
    nlohmann::json solutions = nlohmann::json::array();
    for (const auto& s : report.solutions) {
        solutions.push_back({{"q", s.point.q()},
                             {"theta", s.point.theta()},
                             {"residual", s.residual},
                             {"minSingular", s.minSingular},
                             {"sign", s.sign},
                             {"rank", s.rank}});
    }
    nlohmann::json out = {{"space", toString(report.space)},
                          {"query", report.query},
                          {"count", report.count},
                          {"signedCount", report.signedCount},
                          {"regular", report.regular},
                          {"exhaustive", report.exhaustive},
                          {"solutions", std::move(solutions)}};
    if (report.exhaustive) out["enclosingCount"] = report.enclosingCount;
    if (!report.notes.empty()) out["notes"] = report.notes;
    return out;
}

nlohmann::json toJson(const VolumeEstimate& estimate) {
    return {{"kind", toString(estimate.kind)},
            {"value", estimate.value},
            {"stdError", estimate.stdError},
            {"samples", estimate.samples},
            {"seed", estimate.seed},
            {"domain", estimate.domain},
            {"truncated", estimate.truncated},
            {"nonRegular", estimate.nonRegular},
            {"nonRegularRate", estimate.nonRegularRate},
            {"unresolved", estimate.unresolved},
            {"warning", estimate.warning}};
}

nlohmann::json toJson(const MultiHarnackReport& report) {
    return {{"multiHarnack", report.multiHarnack},
            {"estimate", report.estimate},
            {"target", report.target},
            {"tolerance", report.tolerance},
            {"alpha", report.alpha},
            {"coamoeba", toJson(report.coamoeba)}};
}

} // namespace amoebakit
