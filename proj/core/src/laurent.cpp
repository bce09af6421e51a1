#include "amoebakit/laurent.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "amoebakit/error.hpp"
#include "amoebakit/polytope.hpp"

namespace amoebakit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void requireFinite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw InvalidArgument(std::string(what) + " must be finite");
    }
}

double dotExponent(const ExponentVector& a, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a[k] * v[k];
    }
    return s;
}

double checkedExponent(const ExponentVector& a, const std::vector<double>& q) {
    const double s = dotExponent(a, q);
    if (!(std::abs(s) <= kSafeExponent)) {
        throw OverflowError("OverflowError: monomial log-modulus " + std::to_string(s) +
                            " exceeds the safe exponent range");
    }
    return s;
}

void requireDim(std::size_t expected, std::size_t got) {
    if (expected != got) {
        throw DimensionMismatch("DimensionMismatch: expected " + std::to_string(expected) +
                                " coordinates, got " + std::to_string(got));
    }
}

} // namespace

double normalizeAngle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) {
        t += kTwoPi;
    }
    // fmod can round up to exactly 2*pi for tiny negative inputs.
    if (t >= kTwoPi) {
        t = 0.0;
    }
    return t;
}

// ---------------------------------------------------------------------------
// LogPolarPoint

LogPolarPoint::LogPolarPoint(std::vector<double> q, std::vector<double> theta)
    : q_(std::move(q)), theta_(std::move(theta)) {
    requireDim(q_.size(), theta_.size());
    for (double v : q_) {
        requireFinite(v, "log-modulus");
    }
    for (double& t : theta_) {
        requireFinite(t, "argument");
        t = normalizeAngle(t);
    }
}

LogPolarPoint LogPolarPoint::identity(std::size_t dim) {
    return LogPolarPoint(std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0));
}

LogPolarPoint LogPolarPoint::fromComplex(std::span<const Complex> z) {
    std::vector<double> q(z.size());
    std::vector<double> theta(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (z[k] == Complex(0.0, 0.0)) {
            throw InvalidArgument("point has a zero coordinate; not in the torus");
        }
        q[k] = std::log(std::abs(z[k]));
        theta[k] = std::arg(z[k]);
    }
    return LogPolarPoint(std::move(q), std::move(theta));
}

Complex LogPolarPoint::coordinate(std::size_t k) const {
    return std::polar(std::exp(q_.at(k)), theta_.at(k));
}

std::vector<Complex> LogPolarPoint::toComplex() const {
    std::vector<Complex> z(dim());
    for (std::size_t k = 0; k < dim(); ++k) {
        z[k] = coordinate(k);
    }
    return z;
}

LogPolarPoint LogPolarPoint::operator*(const LogPolarPoint& other) const {
    requireDim(dim(), other.dim());
    std::vector<double> q(dim());
    std::vector<double> theta(dim());
    for (std::size_t k = 0; k < dim(); ++k) {
        q[k] = q_[k] + other.q_[k];
        theta[k] = theta_[k] + other.theta_[k];
    }
    return LogPolarPoint(std::move(q), std::move(theta));
}

// ---------------------------------------------------------------------------
// LaurentPolynomial / PolySystem

LaurentPolynomial::LaurentPolynomial(std::size_t numVars, TermMap terms) : numVars_(numVars) {
    for (auto& [exp, c] : terms) {
        requireDim(numVars_, exp.size());
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw InvalidArgument("coefficient must be finite");
        }
        if (c != Complex(0.0, 0.0)) {
            terms_.emplace(exp, c);
        }
    }
    if (terms_.empty()) {
        throw EmptyPolynomial();
    }
}

double LaurentPolynomial::coefficientNorm() const {
    double s = 0.0;
    for (const auto& [exp, c] : terms_) {
        s += std::abs(c);
    }
    return s;
}

PolySystem::PolySystem(std::vector<LaurentPolynomial> polys, std::vector<std::string> varNames)
    : polys_(std::move(polys)), varNames_(std::move(varNames)) {
    if (polys_.empty()) {
        throw InvalidArgument("system needs at least one polynomial");
    }
    if (varNames_.size() != 2 * polys_.size()) {
        throw DimensionMismatch("DimensionMismatch: a system of " + std::to_string(polys_.size()) +
                                " polynomials needs exactly " + std::to_string(2 * polys_.size()) +
                                " variables, got " + std::to_string(varNames_.size()));
    }
    std::set<std::string> seen(varNames_.begin(), varNames_.end());
    if (seen.size() != varNames_.size()) {
        throw InvalidArgument("duplicate variable name");
    }
    for (const auto& f : polys_) {
        requireDim(varNames_.size(), f.numVars());
    }
}

std::vector<std::string> defaultVarNames(std::size_t numVars) {
    std::vector<std::string> names;
    if (numVars <= 3) {
        const char* base[] = {"x", "y", "z"};
        for (std::size_t k = 0; k < numVars; ++k) {
            names.emplace_back(base[k]);
        }
    } else {
        for (std::size_t k = 0; k < numVars; ++k) {
            names.push_back("z" + std::to_string(k + 1));
        }
    }
    return names;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class PolyParser {
public:
    PolyParser(std::string_view text, const std::optional<std::vector<std::string>>& vars,
               const ParseLimits& limits, std::size_t line)
        : text_(text), limits_(limits), line_(line) {
        if (vars) {
            fixedVars_ = true;
            vars_ = *vars;
        }
    }

    LaurentPolynomial run() {
        struct RawTerm {
            std::map<std::string, long long> powers;
            Complex coeff;
        };
        std::vector<RawTerm> raw;

        skipSpace();
        double sign = 1.0;
        if (peek() == '-' || peek() == '+') {
            sign = get() == '-' ? -1.0 : 1.0;
        }
        while (true) {
            RawTerm t;
            parseTerm(t.coeff, t.powers);
            t.coeff *= sign;
            raw.push_back(std::move(t));
            skipSpace();
            if (atEnd()) {
                break;
            }
            const char c = peek();
            if (c != '+' && c != '-') {
                fail("expected '+', '-' or end of input");
            }
            get();
            sign = c == '-' ? -1.0 : 1.0;
        }

        const std::size_t n = vars_.size();
        LaurentPolynomial::TermMap terms;
        for (const auto& t : raw) {
            ExponentVector e(n, 0);
            for (const auto& [name, pw] : t.powers) {
                const auto it = std::find(vars_.begin(), vars_.end(), name);
                const auto k = static_cast<std::size_t>(it - vars_.begin());
                if (std::llabs(pw) > limits_.maxExponent) {
                    throw ParseError("exponent out of range: " + name + "^" + std::to_string(pw),
                                     line_, 1);
                }
                e[k] = static_cast<int>(pw);
            }
            terms[e] += t.coeff;
        }
        return LaurentPolynomial(n, std::move(terms));
    }

private:
    bool atEnd() const { return pos_ >= text_.size(); }
    char peek() const { return atEnd() ? '\0' : text_[pos_]; }
    char get() { return text_[pos_++]; }

    void skipSpace() {
        while (!atEnd() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("syntax error: " + msg, line_, pos_ + 1);
    }

    static bool isIdentStart(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool isIdentChar(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    void parseTerm(Complex& coeff, std::map<std::string, long long>& powers) {
        skipSpace();
        coeff = Complex(1.0, 0.0);
        const char c = peek();
        if (c == '(' || std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            coeff = parseCoeff();
            skipSpace();
            if (peek() != '*') {
                return;
            }
            get();
            skipSpace();
        }
        parseFactor(powers);
        while (true) {
            skipSpace();
            if (peek() != '*') {
                return;
            }
            get();
            skipSpace();
            parseFactor(powers);
        }
    }

    double parseDecimal(bool allowSign) {
        const std::size_t start = pos_;
        if (allowSign && (peek() == '-' || peek() == '+')) {
            ++pos_;
        }
        bool digits = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            ++pos_;
            digits = true;
        }
        if (peek() == '.') {
            ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                ++pos_;
                digits = true;
            }
        }
        if (!digits) {
            pos_ = start;
            fail("expected a decimal number");
        }
        if (peek() == 'e' || peek() == 'E') {
            const std::size_t save = pos_;
            ++pos_;
            if (peek() == '+' || peek() == '-') {
                ++pos_;
            }
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                pos_ = save;
                fail("malformed exponent in decimal number");
            }
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                ++pos_;
            }
        }
        std::string_view token = text_.substr(start, pos_ - start);
        if (!token.empty() && token.front() == '+') {
            token.remove_prefix(1);
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
            pos_ = start;
            fail("invalid decimal number");
        }
        if (std::abs(value) > limits_.maxCoefficient) {
            throw ParseError("coefficient magnitude exceeds limit", line_, start + 1);
        }
        return value;
    }

    Complex parseCoeff() {
        if (peek() != '(') {
            return Complex(parseDecimal(false), 0.0);
        }
        get();
        skipSpace();
        const double re = parseDecimal(true);
        skipSpace();
        double im = 0.0;
        if (peek() == '+' || peek() == '-') {
            const double s = get() == '-' ? -1.0 : 1.0;
            skipSpace();
            im = s * parseDecimal(false);
            if (peek() != 'i') {
                fail("expected 'i' after imaginary part");
            }
            get();
            skipSpace();
        }
        if (peek() != ')') {
            fail("expected ')'");
        }
        get();
        return Complex(re, im);
    }

    void parseFactor(std::map<std::string, long long>& powers) {
        if (!isIdentStart(peek())) {
            fail("expected a variable name");
        }
        const std::size_t start = pos_;
        while (isIdentChar(peek())) {
            ++pos_;
        }
        const std::string name(text_.substr(start, pos_ - start));
        if (std::find(vars_.begin(), vars_.end(), name) == vars_.end()) {
            if (fixedVars_) {
                throw ParseError("unknown variable '" + name + "'", line_, start + 1);
            }
            vars_.push_back(name);
        }
        long long power = 1;
        skipSpace();
        if (peek() == '^') {
            get();
            skipSpace();
            const std::size_t intStart = pos_;
            bool neg = false;
            if (peek() == '-') {
                neg = true;
                get();
            }
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                fail("expected an integer exponent");
            }
            long long v = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                v = v * 10 + (get() - '0');
                if (v > 1'000'000) {
                    throw ParseError("exponent out of range", line_, intStart + 1);
                }
            }
            power = neg ? -v : v;
            if (std::llabs(power) > limits_.maxExponent) {
                throw ParseError("exponent out of range: " + name + "^" + std::to_string(power),
                                 line_, intStart + 1);
            }
        }
        powers[name] += power;
    }

    std::string_view text_;
    ParseLimits limits_;
    std::size_t line_;
    std::size_t pos_ = 0;
    bool fixedVars_ = false;
    std::vector<std::string> vars_;
};

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

LaurentPolynomial parse(std::string_view text, const std::optional<std::vector<std::string>>& expectedVars,
                        const ParseLimits& limits, std::size_t line) {
    return PolyParser(text, expectedVars, limits, line).run();
}

// ---------------------------------------------------------------------------
// Formatting

std::string format(const LaurentPolynomial& f, const std::optional<std::vector<std::string>>& varNames) {
    const auto names = varNames ? *varNames : defaultVarNames(f.numVars());
    requireDim(f.numVars(), names.size());

    std::vector<std::pair<ExponentVector, Complex>> terms(f.terms().begin(), f.terms().end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        const long da = std::accumulate(a.first.begin(), a.first.end(), 0L);
        const long db = std::accumulate(b.first.begin(), b.first.end(), 0L);
        if (da != db) {
            return da < db;
        }
        return a.first > b.first;
    });

    std::string out;
    bool first = true;
    for (const auto& [exp, c] : terms) {
        std::string factors;
        for (std::size_t k = 0; k < exp.size(); ++k) {
            if (exp[k] == 0) {
                continue;
            }
            if (!factors.empty()) {
                factors += '*';
            }
            factors += names[k];
            if (exp[k] != 1) {
                factors += '^' + std::to_string(exp[k]);
            }
        }

        std::string coeff;
        bool negative = false;
        if (c.imag() == 0.0) {
            negative = std::signbit(c.real());
            const double mag = std::abs(c.real());
            if (mag != 1.0 || factors.empty()) {
                coeff = shortest(mag);
            }
        } else {
            coeff = '(' + shortest(c.real()) + (std::signbit(c.imag()) ? '-' : '+') +
                    shortest(std::abs(c.imag())) + "i)";
        }

        if (first) {
            if (negative) {
                out += '-';
            }
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        out += coeff;
        if (!coeff.empty() && !factors.empty()) {
            out += '*';
        }
        out += factors;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

Complex evaluate(const LaurentPolynomial& f, const LogPolarPoint& z) {
    requireDim(f.numVars(), z.dim());
    Complex sum(0.0, 0.0);
    for (const auto& [exp, c] : f.terms()) {
        const double mod = checkedExponent(exp, z.q());
        const double arg = dotExponent(exp, z.theta());
        sum += c * std::polar(std::exp(mod), arg);
    }
    return sum;
}

double termMagnitude(const LaurentPolynomial& f, const LogPolarPoint& z) {
    requireDim(f.numVars(), z.dim());
    double s = 0.0;
    for (const auto& [exp, c] : f.terms()) {
        s += std::abs(c) * std::exp(checkedExponent(exp, z.q()));
    }
    return s;
}

ComplexMatrix jacobianW(const PolySystem& system, const LogPolarPoint& z) {
    requireDim(system.numVars(), z.dim());
    ComplexMatrix jac(system.n(), system.numVars());
    for (std::size_t j = 0; j < system.n(); ++j) {
        for (const auto& [exp, c] : system.poly(j).terms()) {
            const Complex term =
                c * std::polar(std::exp(checkedExponent(exp, z.q())), dotExponent(exp, z.theta()));
            for (std::size_t k = 0; k < exp.size(); ++k) {
                if (exp[k] != 0) {
                    jac(j, k) += static_cast<double>(exp[k]) * term;
                }
            }
        }
    }
    return jac;
}

// ---------------------------------------------------------------------------
// Transformations

LaurentPolynomial conjPoly(const LaurentPolynomial& f) {
    LaurentPolynomial::TermMap terms;
    for (const auto& [exp, c] : f.terms()) {
        terms.emplace(exp, std::conj(c));
    }
    return LaurentPolynomial(f.numVars(), std::move(terms));
}

LaurentPolynomial conjPrimePoly(const LaurentPolynomial& f) {
    LaurentPolynomial::TermMap terms;
    for (const auto& [exp, c] : f.terms()) {
        ExponentVector neg(exp.size());
        std::transform(exp.begin(), exp.end(), neg.begin(), [](int e) { return -e; });
        terms.emplace(std::move(neg), std::conj(c));
    }
    return LaurentPolynomial(f.numVars(), std::move(terms));
}

LaurentPolynomial translate(const LaurentPolynomial& f, const LogPolarPoint& eps) {
    requireDim(f.numVars(), eps.dim());
    LaurentPolynomial::TermMap terms;
    for (const auto& [exp, c] : f.terms()) {
        const double mod = checkedExponent(exp, eps.q());
        const double arg = dotExponent(exp, eps.theta());
        terms.emplace(exp, c * std::polar(std::exp(mod), arg));
    }
    return LaurentPolynomial(f.numVars(), std::move(terms));
}

LatticePolytope newtonPolytope(const LaurentPolynomial& f) {
    std::vector<LatticePoint> pts;
    pts.reserve(f.size());
    for (const auto& [exp, c] : f.terms()) {
        pts.emplace_back(exp.begin(), exp.end());
    }
    return convexHull(pts, std::max<std::size_t>(f.numVars(), kMaxPolytopeDim));
}

} // namespace amoebakit
