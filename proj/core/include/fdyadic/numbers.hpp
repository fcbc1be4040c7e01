#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fdyadic {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline std::string to_string(const BigInt& v) { return v.str(); }

/// Serialize a rational as "p" or "p/q" (lowest terms, q > 0).
inline std::string to_string(const BigRational& v) {
    if (denominator(v) == 1) return numerator(v).str();
    return numerator(v).str() + "/" + denominator(v).str();
}

inline BigRational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return BigRational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return BigRational(num, den);
}

/// Element a + b*sqrt(5) of the real quadratic field Q(sqrt(5)), with exact
/// rational coordinates. Ordering is decided exactly, so quantities involving
/// the golden ratio phi = (1+sqrt(5))/2 can be compared without floating point.
class GoldenNumber {
public:
    GoldenNumber() : a_(0), b_(0) {}
    GoldenNumber(BigRational rational) : a_(std::move(rational)), b_(0) {}
    GoldenNumber(long v) : a_(v), b_(0) {}
    GoldenNumber(int v) : a_(v), b_(0) {}
    GoldenNumber(BigInt v) : a_(std::move(v)), b_(0) {}
    GoldenNumber(BigRational a, BigRational b) : a_(std::move(a)), b_(std::move(b)) {}

    static GoldenNumber sqrt5() { return {BigRational(0), BigRational(1)}; }
    static GoldenNumber phi() { return {BigRational(1, 2), BigRational(1, 2)}; }
    /// The Galois conjugate of phi, (1 - sqrt(5))/2.
    static GoldenNumber phi_bar() { return {BigRational(1, 2), BigRational(-1, 2)}; }

    const BigRational& rational_part() const { return a_; }
    const BigRational& sqrt5_part() const { return b_; }
    bool is_rational() const { return b_ == 0; }

    GoldenNumber operator-() const { return {-a_, -b_}; }
    GoldenNumber operator+(const GoldenNumber& o) const { return {a_ + o.a_, b_ + o.b_}; }
    GoldenNumber operator-(const GoldenNumber& o) const { return {a_ - o.a_, b_ - o.b_}; }
    GoldenNumber operator*(const GoldenNumber& o) const {
        return {a_ * o.a_ + 5 * b_ * o.b_, a_ * o.b_ + b_ * o.a_};
    }
    GoldenNumber inverse() const {
        BigRational norm = a_ * a_ - 5 * b_ * b_;
        if (norm == 0) throw std::domain_error("GoldenNumber: division by zero");
        return {a_ / norm, -b_ / norm};
    }
    GoldenNumber operator/(const GoldenNumber& o) const { return *this * o.inverse(); }

    GoldenNumber pow(unsigned n) const {
        GoldenNumber result(1);
        GoldenNumber base = *this;
        for (; n; n >>= 1) {
            if (n & 1) result = result * base;
            base = base * base;
        }
        return result;
    }

    /// Sign of a + b*sqrt(5), computed exactly.
    int sign() const {
        int sa = a_.sign(), sb = b_.sign();
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // Mixed signs: compare a^2 with 5 b^2; the larger magnitude wins.
        BigRational lhs = a_ * a_;
        BigRational rhs = 5 * b_ * b_;
        int cmp = lhs.compare(rhs);
        return cmp == 0 ? 0 : (cmp > 0 ? sa : sb);
    }

    bool operator==(const GoldenNumber& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const GoldenNumber& o) const { return !(*this == o); }
    bool operator<(const GoldenNumber& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const GoldenNumber& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const GoldenNumber& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const GoldenNumber& o) const { return (*this - o).sign() >= 0; }

    double to_double() const {
        return a_.convert_to<double>() + b_.convert_to<double>() * 2.2360679774997896964;
    }

    /// Canonical text form in the basis {1, phi}: "r", "s*phi", "s/phi",
    /// or "r+s*phi". "2/phi" is preferred over "-2+2*phi" when it applies.
    std::string str() const {
        // a + b*sqrt(5) = (a - b) + (2b)*phi.
        BigRational r = a_ - b_;
        BigRational s = 2 * b_;
        if (s == 0) return to_string(r);
        if (r == 0) return s == 1 ? "phi" : to_string(s) + "*phi";
        if (r == -s) return to_string(s) + "/phi";  // s*(phi-1) = s/phi
        std::string tail = s == 1 ? "phi" : (s == -1 ? "-phi" : to_string(s) + "*phi");
        if (s > 0) return to_string(r) + "+" + tail;
        return to_string(r) + tail;
    }

private:
    BigRational a_, b_;
};

/// Parse "phi", an integer, or "p/q" as an exact GoldenNumber.
inline GoldenNumber parse_golden(const std::string& s) {
    if (s == "phi") return GoldenNumber::phi();
    return GoldenNumber(parse_rational(s));
}

}  // namespace fdyadic
