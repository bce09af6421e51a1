#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace amoebakit {

using Complex = std::complex<double>;
using ExponentVector = std::vector<int>;

/// Limits enforced when polynomials are built from text or JSON.
struct ParseLimits {
    int maxExponent = 64;
    double maxCoefficient = 1e12;
};

/// A point of the complex torus in log-polar form, z_k = exp(q_k + i*theta_k).
/// theta is kept normalized into [0, 2*pi).
class LogPolarPoint {
public:
    LogPolarPoint() = default;
    LogPolarPoint(std::vector<double> q, std::vector<double> theta);

    static LogPolarPoint identity(std::size_t dim);
    static LogPolarPoint fromComplex(std::span<const Complex> z);

    std::size_t dim() const noexcept { return q_.size(); }
    const std::vector<double>& q() const noexcept { return q_; }
    const std::vector<double>& theta() const noexcept { return theta_; }

    Complex coordinate(std::size_t k) const;
    std::vector<Complex> toComplex() const;

    /// Coordinatewise product (multiplicative translation).
    LogPolarPoint operator*(const LogPolarPoint& other) const;

    friend bool operator==(const LogPolarPoint&, const LogPolarPoint&) = default;

private:
    std::vector<double> q_;
    std::vector<double> theta_;
};

double normalizeAngle(double theta);

class LatticePolytope;

/// Dense row-major complex matrix.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Complex& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Sparse Laurent polynomial with complex coefficients. Never empty; no stored
/// coefficient is zero.
class LaurentPolynomial {
public:
    using TermMap = std::map<ExponentVector, Complex>;

    /// Merges duplicate exponents and drops zeros. Throws EmptyPolynomial if
    /// nothing survives and DimensionMismatch on ragged exponent vectors.
    LaurentPolynomial(std::size_t numVars, TermMap terms);

    std::size_t numVars() const noexcept { return numVars_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Sum of |c_a| (the scale used for relative residuals at the unit torus).
    double coefficientNorm() const;

    friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

private:
    std::size_t numVars_;
    TermMap terms_;
};

/// n Laurent polynomials in 2n variables.
class PolySystem {
public:
    PolySystem(std::vector<LaurentPolynomial> polys, std::vector<std::string> varNames);

    std::size_t n() const noexcept { return polys_.size(); }
    std::size_t numVars() const noexcept { return varNames_.size(); }
    const std::vector<LaurentPolynomial>& polys() const noexcept { return polys_; }
    const LaurentPolynomial& poly(std::size_t j) const { return polys_.at(j); }
    const std::vector<std::string>& varNames() const noexcept { return varNames_; }

    friend bool operator==(const PolySystem&, const PolySystem&) = default;

private:
    std::vector<LaurentPolynomial> polys_;
    std::vector<std::string> varNames_;
};

/// Default variable names: x, y, z for up to three variables, z1..zN beyond.
std::vector<std::string> defaultVarNames(std::size_t numVars);

/// Parses one polynomial. Without `expectedVars` the variables are taken in
/// order of first appearance. `line` is used for diagnostics only.
LaurentPolynomial parse(std::string_view text,
                        const std::optional<std::vector<std::string>>& expectedVars = std::nullopt,
                        const ParseLimits& limits = {},
                        std::size_t line = 1);

/// Canonical text: terms by ascending total degree, ties broken so that
/// earlier variables come first; shortest round-trip coefficients.
std::string format(const LaurentPolynomial& f,
                   const std::optional<std::vector<std::string>>& varNames = std::nullopt);

/// Largest |<a,q>| accepted before evaluation reports overflow.
inline constexpr double kSafeExponent = 700.0;

Complex evaluate(const LaurentPolynomial& f, const LogPolarPoint& z);

/// Sum over terms of |c_a| * |z^a|; the natural scale of |f(z)|.
double termMagnitude(const LaurentPolynomial& f, const LogPolarPoint& z);

/// Entry (j,k) is z_k * d f_j / d z_k, the derivative in w = log z
/// (n rows, 2n columns).
ComplexMatrix jacobianW(const PolySystem& system, const LogPolarPoint& z);

LaurentPolynomial conjPoly(const LaurentPolynomial& f);
LaurentPolynomial conjPrimePoly(const LaurentPolynomial& f);

/// g(z) = f(eps * z).
LaurentPolynomial translate(const LaurentPolynomial& f, const LogPolarPoint& eps);

LatticePolytope newtonPolytope(const LaurentPolynomial& f);

} // namespace amoebakit
