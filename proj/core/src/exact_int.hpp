#pragma once

// Integer types for the exact polytope kernels. Geometry code is written once
// as templates over the integer type and instantiated twice: first with
// Checked128, which throws Overflow128 instead of wrapping, then with cpp_int
// when that happens.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace amoebakit::detail {

struct Overflow128 {};

class Checked128 {
public:
    Checked128() = default;
    Checked128(std::int64_t v) : v_(v) {} // NOLINT(google-explicit-constructor)

    static Checked128 fromRaw(__int128 v) {
        Checked128 r;
        r.v_ = v;
        return r;
    }
    __int128 raw() const { return v_; }

    friend Checked128 operator+(Checked128 a, Checked128 b) {
        __int128 r;
        if (__builtin_add_overflow(a.v_, b.v_, &r)) throw Overflow128{};
        return fromRaw(r);
    }
    friend Checked128 operator-(Checked128 a, Checked128 b) {
        __int128 r;
        if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw Overflow128{};
        return fromRaw(r);
    }
    friend Checked128 operator*(Checked128 a, Checked128 b) {
        __int128 r;
        if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw Overflow128{};
        return fromRaw(r);
    }
    friend Checked128 operator/(Checked128 a, Checked128 b) { return fromRaw(a.v_ / b.v_); }
    friend Checked128 operator%(Checked128 a, Checked128 b) { return fromRaw(a.v_ % b.v_); }
    Checked128 operator-() const { return Checked128{} - *this; }
    Checked128& operator+=(Checked128 b) { return *this = *this + b; }
    Checked128& operator-=(Checked128 b) { return *this = *this - b; }
    Checked128& operator*=(Checked128 b) { return *this = *this * b; }

    friend bool operator==(Checked128 a, Checked128 b) { return a.v_ == b.v_; }
    friend auto operator<=>(Checked128 a, Checked128 b) { return a.v_ <=> b.v_; }

private:
    __int128 v_ = 0;
};

using BigInt = boost::multiprecision::cpp_int;

inline BigInt toBig(const Checked128& v) {
    const __int128 r = v.raw();
    const bool neg = r < 0;
    unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(r) : static_cast<unsigned __int128>(r);
    BigInt out = static_cast<std::uint64_t>(mag >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(mag);
    return neg ? BigInt(-out) : out;
}
inline BigInt toBig(const BigInt& v) { return v; }

template <class Int>
int sign(const Int& v) {
    return v > Int(0) ? 1 : (v < Int(0) ? -1 : 0);
}

template <class Int>
Int absValue(const Int& v) {
    return v < Int(0) ? -v : v;
}

template <class Int>
Int gcd(Int a, Int b) {
    a = absValue(a);
    b = absValue(b);
    while (b != Int(0)) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

template <class Int>
using IntMatrix = std::vector<std::vector<Int>>;

/// Fraction-free Gaussian elimination (Bareiss). Returns the determinant of a
/// square matrix.
template <class Int>
Int determinant(IntMatrix<Int> m) {
    const std::size_t n = m.size();
    if (n == 0) return Int(1);
    Int prev(1);
    int flip = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == Int(0)) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == Int(0)) ++r;
            if (r == n) return Int(0);
            std::swap(m[k], m[r]);
            flip = -flip;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    return flip > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

/// Rank of an arbitrary integer matrix (rows need not be square).
template <class Int>
std::size_t rank(IntMatrix<Int> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == Int(0)) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == Int(0)) continue;
            const Int a = m[r][c];
            const Int b = m[i][c];
            for (std::size_t j = c; j < cols; ++j) {
                m[i][j] = m[i][j] * a - m[r][j] * b;
            }
            // Keep entries small.
            Int g(0);
            for (std::size_t j = c; j < cols; ++j) g = gcd(g, m[i][j]);
            if (g > Int(1)) {
                for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] / g;
            }
        }
        ++r;
    }
    return r;
}

} // namespace amoebakit::detail
