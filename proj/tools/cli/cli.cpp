#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "amoebakit/error.hpp"
#include "amoebakit/io.hpp"
#include "amoebakit/parallel.hpp"
#include "amoebakit/verify.hpp"

namespace amoebakit::cli {

namespace {

constexpr double kPi = std::numbers::pi;

/// Bad flag values and unreadable inputs; reported with exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double parseNumber(std::string_view text, const std::string& what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw UsageError("invalid number '" + std::string(text) + "' in " + what);
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = text.find(sep);
        parts.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos) return parts;
        text = text.substr(pos + 1);
    }
}

std::vector<double> parsePoint(const std::string& text) {
    std::vector<double> v;
    for (auto part : split(text, ',')) v.push_back(parseNumber(part, "--point"));
    return v;
}

/// "lo:hi[,lo:hi...]"; a single interval is repeated for every coordinate.
Box parseBox(const std::string& text, std::size_t dim) {
    Box box;
    for (auto part : split(text, ',')) {
        const auto bounds = split(part, ':');
        if (bounds.size() != 2) throw UsageError("--box intervals are written lo:hi");
        box.sides.emplace_back(parseNumber(bounds[0], "--box"), parseNumber(bounds[1], "--box"));
    }
    if (box.sides.size() == 1 && dim > 1) box.sides.resize(dim, box.sides[0]);
    if (box.sides.size() != dim) {
        throw UsageError("--box needs 1 or " + std::to_string(dim) + " intervals");
    }
    return box;
}

std::pair<std::size_t, std::size_t> parseResolution(const std::string& text) {
    const auto parts = split(text, 'x');
    if (parts.size() > 2) throw UsageError("--resolution is W or WxH");
    std::size_t w = 0;
    std::size_t h = 0;
    auto read = [](std::string_view s, std::size_t& v) {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
            throw UsageError("invalid resolution '" + std::string(s) + "'");
        }
    };
    read(parts[0], w);
    h = w;
    if (parts.size() == 2) read(parts[1], h);
    return {w, h};
}

PolySystem loadSystem(const std::string& path) {
    std::string text;
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw UsageError("cannot read input file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return parseSystemText(text);
}

void writeText(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + path + "'");
    file << text;
    if (!file) throw Error("write to '" + path + "' failed");
}

struct Options {
    std::string input;
    bool json = false;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t fiberSamples = 0;
    std::string box;
    std::string resolution;
    std::size_t threads = 1;
    std::string out;
    double tol = 0.0;
    std::string space;
    std::string point;
};

SolverConfig solverConfig(const Options& o) {
    SolverConfig cfg;
    cfg.seed = o.seed;
    if (o.tol > 0.0) cfg.tol = o.tol;
    return cfg;
}

MeasureConfig measureConfig(const Options& o) {
    MeasureConfig cfg;
    cfg.solver = solverConfig(o);
    cfg.threads = o.threads;
    return cfg;
}

Box defaultBox(FiberSpace space, std::size_t dim, double amoebaHalfWidth) {
    if (space == FiberSpace::Coamoeba) return Box{std::vector<std::pair<double, double>>(dim, {0.0, kPi})};
    return Box::cube(dim, amoebaHalfWidth);
}

std::string runCommand(const std::string& command, const Options& o) {
    const PolySystem system = loadSystem(o.input);
    const std::size_t dim = system.numVars();

    if (command == "parse-check") {
        if (o.json) return toJson(system).dump() + "\n";
        return formatSystemFile(system);
    }
    if (command == "newton") {
        nlohmann::json polys = nlohmann::json::array();
        std::string text;
        for (std::size_t j = 0; j < system.n(); ++j) {
            const auto p = newtonPolytope(system.poly(j));
            polys.push_back(toJson(p));
            text += "f" + std::to_string(j + 1) + ":";
            for (const auto& v : p.vertices()) {
                text += " (";
                for (std::size_t k = 0; k < v.size(); ++k) text += (k ? "," : "") + std::to_string(v[k]);
                text += ")";
            }
            text += "\n";
        }
        if (o.json) return nlohmann::json{{"polytopes", polys}}.dump() + "\n";
        return text;
    }
    if (command == "degrees") {
        return toJson(alphaBeta(system)).dump() + "\n";
    }

    const FiberSpace space = fiberSpaceFromString(o.space);
    if (command == "fiber") {
        if (o.point.empty()) throw UsageError("fiber needs --point");
        const auto query = parsePoint(o.point);
        if (query.size() != dim) {
            throw UsageError("--point needs " + std::to_string(dim) + " coordinates");
        }
        return toJson(fiber(system, space, query, solverConfig(o))).dump() + "\n";
    }
    if (command == "multivol") {
        const std::uint64_t samples = o.samples ? o.samples : 10000;
        if (space == FiberSpace::Coamoeba) {
            return toJson(multiVolCoamoeba(system, samples, o.seed, measureConfig(o))).dump() + "\n";
        }
        const Box box = o.box.empty() ? defaultBox(space, dim, 10.0) : parseBox(o.box, dim);
        return toJson(multiVolAmoebaBox(system, box, samples, o.seed, measureConfig(o))).dump() + "\n";
    }
    if (command == "volume") {
        const Box box = o.box.empty() ? Box::cube(dim, 10.0) : parseBox(o.box, dim);
        Sampling sampling = Sampling::monteCarlo(o.samples ? o.samples : 10000);
        if (!o.resolution.empty()) {
            const auto [w, h] = parseResolution(o.resolution);
            if (w != h) throw UsageError("volume grids are square; use --resolution N");
            sampling = Sampling::grid(w);
        }
        return toJson(amoebaVolumeBox(system, box, sampling, o.seed, measureConfig(o))).dump() + "\n";
    }
    if (command == "verify") {
        VerifyConfig cfg;
        cfg.solver = solverConfig(o);
        cfg.seed = o.seed;
        cfg.threads = o.threads;
        if (o.samples) {
            cfg.coamoebaSamples = o.samples;
            cfg.volumeSamples = o.samples;
        }
        if (o.fiberSamples) cfg.fiberSamples = o.fiberSamples;
        if (!o.box.empty()) {
            const Box box = parseBox(o.box, dim);
            const auto [lo, hi] = box.sides[0];
            if (lo != -hi || std::any_of(box.sides.begin(), box.sides.end(),
                                          [&](const auto& s) { return s != box.sides[0]; })) {
                throw UsageError("verify uses a centred cube; pass --box -w:w");
            }
            cfg.boxHalfWidth = hi;
        }
        return toJson(verifySystem(system, cfg)).dump(2) + "\n";
    }
    if (command == "render") {
        const Box box = o.box.empty() ? defaultBox(space, dim, 4.0) : parseBox(o.box, dim);
        const auto [w, h] = o.resolution.empty() ? std::pair<std::size_t, std::size_t>{200, 200}
                                                 : parseResolution(o.resolution);
        const RasterImage image = renderRaster(system, space, box, w, h, solverConfig(o), o.threads);
        if (o.out.empty()) return o.json ? toJson(image).dump() + "\n" : toPgm(image);
        writeText(o.out, toPgm(image));
        if (o.json) writeText(o.out + ".json", toJson(image).dump() + "\n");
        return {};
    }
    throw UsageError("unknown command '" + command + "'");
}

} // namespace

RasterImage renderRaster(const PolySystem& system, FiberSpace space, const Box& box, std::size_t width,
                         std::size_t height, const SolverConfig& cfg, std::size_t threads) {
    if (system.n() != 1) throw Unsupported("Unsupported: rasters are only drawn for curves (n = 1)");
    if (box.sides.size() != 2) throw DimensionMismatch("DimensionMismatch: raster box needs 2 intervals");
    if (width == 0 || height == 0 || width > kMaxResolution || height > kMaxResolution) {
        throw InvalidArgument("raster resolution must be between 1 and " + std::to_string(kMaxResolution));
    }
    RasterImage image;
    image.space = space;
    image.box = box;
    if (box.volume() == 0.0) return image;
    image.width = width;
    image.height = height;
    image.values.assign(width * height, 0);

    const auto [x0, x1] = box.sides[0];
    const auto [y0, y1] = box.sides[1];
    const Degrees degrees = alphaBeta(system);
    std::vector<std::uint8_t> fallback(height, 0);
    parallelFor(height, threads, [&](std::size_t row) {
        for (std::size_t col = 0; col < width; ++col) {
            const std::vector<double> query{
                x0 + (x1 - x0) * (static_cast<double>(col) + 0.5) / static_cast<double>(width),
                y1 - (y1 - y0) * (static_cast<double>(row) + 0.5) / static_cast<double>(height)};
            std::size_t count = 0;
            if (space == FiberSpace::Amoeba && dominantTermExcludes(system, query)) {
                count = 0;
            } else {
                try {
                    count = curveFiberExact(system, space, query, cfg).count;
                } catch (const NonGenericQuery&) {
                    count = space == FiberSpace::Amoeba ? amoebaFiber(system, query, cfg, degrees).count
                                                        : coamoebaFiber(system, query, cfg).count;
                    ++fallback[row];
                }
            }
            image.values[row * width + col] = static_cast<std::uint8_t>(std::min<std::size_t>(count, 255));
        }
    });
    for (auto f : fallback) image.fallbackPixels += f;
    return image;
}

std::string toPgm(const RasterImage& image) {
    const int maxval = image.values.empty() ? 1 : std::max(1, static_cast<int>(*std::max_element(
                                                                 image.values.begin(), image.values.end())));
    std::string out = "P2\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n" +
                      std::to_string(maxval) + "\n";
    for (std::size_t row = 0; row < image.height; ++row) {
        for (std::size_t col = 0; col < image.width; ++col) {
            if (col) out += ' ';
            out += std::to_string(image.values[row * image.width + col]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json toJson(const RasterImage& image) {
    nlohmann::json box = nlohmann::json::array();
    for (const auto& [lo, hi] : image.box.sides) box.push_back({lo, hi});
    return {{"width", image.width},
            {"height", image.height},
            {"space", toString(image.space)},
            {"box", std::move(box)},
            {"fallbackPixels", image.fallbackPixels},
            {"values", image.values}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Amoeba and coamoeba invariants of half-dimensional complete intersections", "amoebakit"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("-i,--input", o.input, "System file (text or canonical JSON; - for stdin)")->required();
    app.add_flag("--json", o.json, "JSON output where text is the default");
    app.add_option("--seed", o.seed, "Master seed");
    app.add_option("--samples", o.samples, "Monte Carlo samples");
    app.add_option("--box", o.box, "Box lo:hi[,lo:hi...]");
    app.add_option("--resolution", o.resolution, "Grid or raster resolution W[xH]");
    app.add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1, 1024));
    app.add_option("--out", o.out, "Output path");
    app.add_option("--tol", o.tol, "Solver residual tolerance")->check(CLI::PositiveNumber);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"parse-check", "Parse a system and print its canonical form"},
        {"newton", "Print the Newton polytope vertices"},
        {"degrees", "Print the conj-degree alpha and conj'-degree beta"},
        {"fiber", "Solve one amoeba or coamoeba fiber"},
        {"multivol", "Estimate MultiVol of the coamoeba (torus) or of the amoeba in a box"},
        {"volume", "Estimate the amoeba volume in a box"},
        {"verify", "Run the verification battery"},
        {"render", "Rasterize fiber counts of a curve as PGM"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        if (name == "fiber" || name == "multivol" || name == "render") {
            sub->add_option("--space", o.space, "amoeba or coamoeba")
                ->check(CLI::IsMember({"amoeba", "coamoeba"}));
        }
        if (name == "fiber") sub->add_option("--point", o.point, "Query q or p, comma separated");
        if (name == "verify") sub->add_option("--fiber-samples", o.fiberSamples, "Random queries per fiber space");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (o.space.empty()) o.space = command == "multivol" ? "coamoeba" : "amoeba";
    try {
        std::string text = runCommand(command, o);
        if (!o.out.empty() && command != "render") {
            writeText(o.out, text);
        } else {
            out << text;
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitComputation;
    }
}

} // namespace amoebakit::cli
