// Exhaustive fibers of plane curves. The fiber of Arg_pi (resp. Log) over a
// query is the fixed locus of an antiholomorphic involution acting on the
// solutions of a square system {f, f*}; that system is solved completely by
// eliminating y with a Sylvester resultant.
//
// Both systems are first moved to the query: f_q(u) = f(e^q u) for the
// amoeba and f_p(t) = f(e^{ip} t) for the coamoeba, so the fiber becomes the
// unit torus (resp. the real points) of {f_q, conj'(f_q)} (resp. {f_p, conj(f_p)}).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "amoebakit/error.hpp"
#include "amoebakit/fibers.hpp"
#include "fiber_internal.hpp"

namespace amoebakit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTrim = 1e-12;          // relative size of a vanishing coefficient
constexpr double kVanishing = 1e-11;     // resultant identically zero (relative to Hadamard)
constexpr double kFiberTol = 1e-9;       // membership tolerance for fiber points
constexpr double kAmbiguous = 1e-6;      // classification no longer trustworthy below this gap
constexpr double kSameRoot = 1e-8;

using Vec2 = std::array<Complex, 2>;

/// Ordinary polynomial sum c[i][j] x^i y^j obtained by clearing denominators.
struct Dense2 {
    int degX = 0;
    int degY = 0;
    std::vector<Complex> c;

    Complex at(int i, int j) const { return c[static_cast<std::size_t>(i * (degY + 1) + j)]; }
};

Dense2 clearDenominators(const LaurentPolynomial& f) {
    int minX = INT32_MAX, minY = INT32_MAX, maxX = INT32_MIN, maxY = INT32_MIN;
    for (const auto& [e, c] : f.terms()) {
        minX = std::min(minX, e[0]);
        minY = std::min(minY, e[1]);
        maxX = std::max(maxX, e[0]);
        maxY = std::max(maxY, e[1]);
    }
    Dense2 d;
    d.degX = maxX - minX;
    d.degY = maxY - minY;
    d.c.assign(static_cast<std::size_t>((d.degX + 1) * (d.degY + 1)), Complex(0.0, 0.0));
    for (const auto& [e, c] : f.terms()) {
        d.c[static_cast<std::size_t>((e[0] - minX) * (d.degY + 1) + (e[1] - minY))] = c;
    }
    return d;
}

int totalDegree(const Dense2& d) {
    int t = 0;
    for (int i = 0; i <= d.degX; ++i) {
        for (int j = 0; j <= d.degY; ++j) {
            if (d.at(i, j) != Complex(0.0, 0.0)) t = std::max(t, i + j);
        }
    }
    return t;
}

/// Coefficients in y of F(x0, y).
std::vector<Complex> inY(const Dense2& d, Complex x0) {
    std::vector<Complex> a(static_cast<std::size_t>(d.degY + 1), Complex(0.0, 0.0));
    for (int j = 0; j <= d.degY; ++j) {
        Complex s(0.0, 0.0);
        for (int i = d.degX; i >= 0; --i) s = s * x0 + d.at(i, j);
        a[static_cast<std::size_t>(j)] = s;
    }
    return a;
}

/// Coefficients in x of F when it does not involve y.
std::vector<Complex> inX(const Dense2& d) {
    std::vector<Complex> a(static_cast<std::size_t>(d.degX + 1));
    for (int i = 0; i <= d.degX; ++i) a[static_cast<std::size_t>(i)] = d.at(i, 0);
    return a;
}

/// Sylvester determinant of a (degree l) and b (degree m), ascending
/// coefficients. `hadamard` receives the product of the row norms.
Complex sylvester(const std::vector<Complex>& a, const std::vector<Complex>& b, double& hadamard) {
    const auto l = static_cast<Eigen::Index>(a.size()) - 1;
    const auto m = static_cast<Eigen::Index>(b.size()) - 1;
    const Eigen::Index size = l + m;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(size, size);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index k = 0; k <= l; ++k) s(r, r + k) = a[static_cast<std::size_t>(l - k)];
    }
    for (Eigen::Index r = 0; r < l; ++r) {
        for (Eigen::Index k = 0; k <= m; ++k) s(m + r, r + k) = b[static_cast<std::size_t>(m - k)];
    }
    hadamard = 1.0;
    for (Eigen::Index r = 0; r < size; ++r) hadamard *= s.row(r).norm();
    return s.partialPivLu().determinant();
}

/// Parlett-Reinsch balancing with radix 2.
void balance(Eigen::MatrixXcd& a) {
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / 2.0;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while (c > g) {
                f /= 2.0;
                c /= 4.0;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

/// Nonzero roots of sum c_i x^i (ascending). Coefficients below kTrim
/// relative to the largest are treated as zero at both ends.
std::vector<Complex> nonzeroRoots(std::vector<Complex> c) {
    double big = 0.0;
    for (const auto& v : c) big = std::max(big, std::abs(v));
    if (big == 0.0) return {};
    while (!c.empty() && std::abs(c.back()) <= kTrim * big) c.pop_back();
    std::size_t low = 0;
    while (low < c.size() && std::abs(c[low]) <= kTrim * big) ++low;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
    if (c.size() <= 1) return {};
    const auto deg = static_cast<Eigen::Index>(c.size()) - 1;
    if (deg == 1) return {-c[0] / c[1]};

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (Eigen::Index i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < deg; ++i) comp(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    balance(comp);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<Complex> roots;
    for (Eigen::Index i = 0; i < deg; ++i) {
        const Complex r = es.eigenvalues()(i);
        if (std::isfinite(r.real()) && std::isfinite(r.imag()) && r != Complex(0.0, 0.0)) roots.push_back(r);
    }
    return roots;
}

/// Value and w-gradient of f(e^w) for a bivariate Laurent polynomial.
struct Eval2 {
    Complex value;
    Vec2 grad;
    double magnitude;
};

std::optional<Eval2> eval2(const LaurentPolynomial& f, const Vec2& w) {
    Eval2 out{Complex(0.0, 0.0), {Complex(0.0, 0.0), Complex(0.0, 0.0)}, 0.0};
    for (const auto& [e, c] : f.terms()) {
        const Complex expo = static_cast<double>(e[0]) * w[0] + static_cast<double>(e[1]) * w[1];
        if (std::abs(expo.real()) > kSafeExponent) return std::nullopt;
        const Complex t = c * std::exp(expo);
        out.value += t;
        out.grad[0] += static_cast<double>(e[0]) * t;
        out.grad[1] += static_cast<double>(e[1]) * t;
        out.magnitude += std::abs(t);
    }
    return out;
}

double residual2(const LaurentPolynomial& f, const LaurentPolynomial& g, const Vec2& w) {
    const auto a = eval2(f, w);
    const auto b = eval2(g, w);
    if (!a || !b) return INFINITY;
    return std::max(std::abs(a->value) / a->magnitude, std::abs(b->value) / b->magnitude);
}

/// Complex Newton in w = log z on the square system {f, g}.
std::optional<Vec2> polish(const LaurentPolynomial& f, const LaurentPolynomial& g, Vec2 w, double tol) {
    const Vec2 start = w;
    for (int it = 0; it < 40; ++it) {
        const auto a = eval2(f, w);
        const auto b = eval2(g, w);
        if (!a || !b) return std::nullopt;
        const Complex det = a->grad[0] * b->grad[1] - a->grad[1] * b->grad[0];
        if (det == Complex(0.0, 0.0)) break;
        const Complex d0 = -(b->grad[1] * a->value - a->grad[1] * b->value) / det;
        const Complex d1 = -(-b->grad[0] * a->value + a->grad[0] * b->value) / det;
        if (!std::isfinite(std::abs(d0)) || !std::isfinite(std::abs(d1))) return std::nullopt;
        w[0] += d0;
        w[1] += d1;
        if (std::max(std::abs(w[0] - start[0]), std::abs(w[1] - start[1])) > 1.0) return std::nullopt;
        if (std::max(std::abs(d0), std::abs(d1)) < 1e-15 * (1.0 + std::abs(w[0]) + std::abs(w[1]))) break;
    }
    if (residual2(f, g, w) <= tol) return w;
    return std::nullopt;
}

double circularGap(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

bool sameRoot(const Vec2& a, const Vec2& b) {
    for (int k = 0; k < 2; ++k) {
        if (std::abs(a[k].real() - b[k].real()) > kSameRoot) return false;
        if (circularGap(a[k].imag(), b[k].imag()) > kSameRoot) return false;
    }
    return true;
}

/// Divides by the largest coefficient modulus; roots are unchanged.
LaurentPolynomial normalized(const LaurentPolynomial& f) {
    double big = 0.0;
    for (const auto& [e, c] : f.terms()) big = std::max(big, std::abs(c));
    LaurentPolynomial::TermMap t;
    for (const auto& [e, c] : f.terms()) t.emplace(e, c / big);
    return LaurentPolynomial(f.numVars(), std::move(t));
}

/// All torus solutions (in log coordinates) of {f, g} for bivariate f, g.
std::vector<Vec2> solveBivariate(const LaurentPolynomial& f, const LaurentPolynomial& g, double tol) {
    const Dense2 F = clearDenominators(f);
    const Dense2 G = clearDenominators(g);

    std::vector<Vec2> candidates;

    auto addCandidates = [&](Complex x0, const Dense2& source) {
        for (const Complex y0 : nonzeroRoots(inY(source, x0))) {
            candidates.push_back({std::log(x0), std::log(y0)});
        }
    };

    if (F.degY == 0 && G.degY == 0) {
        throw NonGenericQuery("NonGenericQuery: neither polynomial involves the second variable");
    }
    if (F.degY == 0 || G.degY == 0) {
        const Dense2& univariate = F.degY == 0 ? F : G;
        const Dense2& other = F.degY == 0 ? G : F;
        for (const Complex x0 : nonzeroRoots(inX(univariate))) {
            const auto ys = inY(other, x0);
            double big = 0.0;
            for (const auto& v : ys) big = std::max(big, std::abs(v));
            double tail = 0.0;
            for (std::size_t j = 1; j < ys.size(); ++j) tail = std::max(tail, std::abs(ys[j]));
            if (tail <= kVanishing * std::max(big, 1.0) && std::abs(ys[0]) <= kVanishing) {
                throw NonGenericQuery("NonGenericQuery: the system has a common component");
            }
            addCandidates(x0, other);
        }
    } else {
        const int l = F.degY;
        const int m = G.degY;
        const int bound = std::min(l * G.degX + m * F.degX, totalDegree(F) * totalDegree(G));
        const int samples = bound + 1;
        std::vector<Complex> values(static_cast<std::size_t>(samples));
        double largest = 0.0;
        double hadamardMax = 0.0;
        for (int k = 0; k < samples; ++k) {
            const Complex x = std::polar(1.0, 2.0 * kPi * k / samples);
            double h = 0.0;
            values[static_cast<std::size_t>(k)] = sylvester(inY(F, x), inY(G, x), h);
            largest = std::max(largest, std::abs(values[static_cast<std::size_t>(k)]));
            hadamardMax = std::max(hadamardMax, h);
        }
        if (!(largest > kVanishing * hadamardMax)) {
            throw NonGenericQuery("NonGenericQuery: resultant vanishes identically (shared component)");
        }
        std::vector<Complex> coeffs(static_cast<std::size_t>(samples));
        for (int i = 0; i < samples; ++i) {
            Complex s(0.0, 0.0);
            for (int k = 0; k < samples; ++k) {
                s += values[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * kPi * i * k / samples);
            }
            coeffs[static_cast<std::size_t>(i)] = s / static_cast<double>(samples);
        }
        for (const Complex x0 : nonzeroRoots(coeffs)) {
            addCandidates(x0, F);
            addCandidates(x0, G);
        }
    }

    std::vector<Vec2> roots;
    for (const auto& c : candidates) {
        const auto w = polish(f, g, c, tol);
        if (!w) continue;
        const bool dup = std::any_of(roots.begin(), roots.end(), [&](const Vec2& r) { return sameRoot(r, *w); });
        if (!dup) roots.push_back(*w);
    }
    return roots;
}

struct OracleResult {
    std::vector<Vec2> roots; // in coordinates centred on the query
    LaurentPolynomial base;
};

OracleResult solveEnclosing(const PolySystem& system, FiberSpace space, std::span<const double> query,
                            double tol) {
    if (system.n() != 1) {
        throw Unsupported("Unsupported: the exact oracle handles curves (n = 1) only");
    }
    if (query.size() != 2 || !std::isfinite(query[0]) || !std::isfinite(query[1])) {
        throw DimensionMismatch("DimensionMismatch: curve queries have two finite coordinates");
    }
    const LaurentPolynomial& f = system.poly(0);
    const LogPolarPoint shift = space == FiberSpace::Amoeba
                                    ? LogPolarPoint({query[0], query[1]}, {0.0, 0.0})
                                    : LogPolarPoint({0.0, 0.0}, {query[0], query[1]});
    LaurentPolynomial base = normalized(translate(f, shift));
    LaurentPolynomial mirror =
        normalized(space == FiberSpace::Amoeba ? conjPrimePoly(base) : conjPoly(base));
    auto roots = solveBivariate(base, mirror, tol);
    return {std::move(roots), std::move(base)};
}

} // namespace

std::size_t curveConjIntersections(const PolySystem& system, std::span<const double> p, const SolverConfig& cfg) {
    return solveEnclosing(system, FiberSpace::Coamoeba, p, cfg.tol).roots.size();
}

FiberReport curveFiberExact(const PolySystem& system, FiberSpace space, std::span<const double> query,
                            const SolverConfig& cfg) {
    const auto solved = solveEnclosing(system, space, query, cfg.tol);

    FiberReport report;
    report.space = space;
    report.query.assign(query.begin(), query.end());
    report.exhaustive = true;
    report.enclosingCount = solved.roots.size();

    for (const auto& w : solved.roots) {
        // Distance from the fixed locus of the involution.
        double gap = 0.0;
        for (int k = 0; k < 2; ++k) {
            gap = std::max(gap, space == FiberSpace::Amoeba ? std::abs(w[k].real()) : std::abs(std::sin(w[k].imag())));
        }
        if (gap > kAmbiguous) continue;
        if (gap > kFiberTol) {
            report.regular = false;
            report.notes = "fiber membership ambiguous for an enclosing root";
            continue;
        }
        std::vector<double> q(2), theta(2);
        for (std::size_t k = 0; k < 2; ++k) {
            if (space == FiberSpace::Amoeba) {
                q[k] = query[k];
                theta[k] = w[k].imag();
            } else {
                q[k] = w[k].real();
                theta[k] = query[k] + (std::cos(w[k].imag()) < 0.0 ? kPi : 0.0);
            }
        }
        LogPolarPoint z(std::move(q), std::move(theta));
        if (auto refined = detail::refineInChart(system, space, z, cfg)) {
            z = std::move(*refined);
        } else {
            report.regular = false;
            report.notes = "fiber point failed to refine in its chart";
        }
        report.solutions.push_back(detail::describeSolution(system, std::move(z), cfg));
    }
    detail::finalizeReport(report, cfg);
    return report;
}

std::vector<Complex> detail::univariateRoots(std::vector<Complex> c) {
    return nonzeroRoots(std::move(c));
}

} // namespace amoebakit
