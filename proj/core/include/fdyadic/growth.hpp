#pragma once

#include "fdyadic/numbers.hpp"

#include <array>
#include <initializer_list>
#include <string>
#include <vector>

namespace fdyadic {

// ---------------------------------------------------------------------------
// Exact series algebra
// ---------------------------------------------------------------------------

/// Univariate polynomial with exact integer coefficients, ascending order,
/// no trailing zeros.
class Polynomial {
public:
    Polynomial() = default;  // zero
    Polynomial(std::initializer_list<long> coeffs);
    explicit Polynomial(std::vector<BigInt> coeffs);

    static Polynomial one() { return Polynomial({1}); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return coeffs_.empty(); }
    BigInt coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(coeffs_.size())) ? coeffs_[i] : BigInt(0);
    }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    int term_count() const;

    Polynomial operator+(const Polynomial&) const;
    Polynomial operator-(const Polynomial&) const;
    Polynomial operator*(const Polynomial&) const;
    Polynomial operator-() const;
    Polynomial scaled(const BigInt& s) const;
    bool operator==(const Polynomial&) const = default;

    BigInt content() const;  // nonnegative gcd of coefficients
    Polynomial primitive_part() const;

    static Polynomial gcd(Polynomial a, Polynomial b);
    /// Exact quotient; throws std::domain_error when the division leaves a remainder.
    static Polynomial div_exact(const Polynomial& a, const Polynomial& b);

    std::string str(const std::string& var = "z") const;

private:
    void trim();
    std::vector<BigInt> coeffs_;
};

/// Quotient of integer polynomials, normalized: gcd cancelled, common content
/// removed, denominator with positive constant term. The denominator must
/// have a nonzero constant term so the function expands at z = 0.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(Polynomial::one()) {}
    RationalFunction(Polynomial num, Polynomial den);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    /// Taylor coefficients 0..n at z = 0, exact.
    std::vector<BigRational> expand(int n) const;

    std::string str(const std::string& var = "z") const;
    bool operator==(const RationalFunction&) const = default;

private:
    Polynomial num_, den_;
};

// ---------------------------------------------------------------------------
// Transfer matrices for the five cone types
// ---------------------------------------------------------------------------

constexpr int kConeTypeCount = 5;

/// Row i lists, per cone type j, how many geodesic continuations a type-i
/// vertex has into type-j vertices. The word-count matrix keeps parallel
/// edges separate; the point-count matrix collapses them.
struct TransferMatrix {
    enum class Role { WordCount, PointCount };
    Role role;
    std::array<std::array<int, kConeTypeCount>, kConeTypeCount> entries;

    static TransferMatrix word_counts();
    static TransferMatrix point_counts();
};

using CountVector = std::array<BigInt, kConeTypeCount>;

/// Iterates v_n = M v_{n-1} from the all-ones vector; returns v_0..v_N.
std::vector<CountVector> recurrence_series(const TransferMatrix& m, int n);

/// Exact solve of (I - Mz) u(z) = v0 by fraction-free elimination; results
/// normalized. Throws VerificationError if the system is singular.
std::vector<RationalFunction> resolvent_vector(const std::vector<std::vector<BigInt>>& m,
                                               const std::vector<BigInt>& v0);
std::vector<RationalFunction> resolvent_vector(const TransferMatrix& m);

/// Component 0 of the word-count resolvent: counts geodesic words by length.
RationalFunction geodesic_growth_function();
/// Component 0 of the point-count resolvent: counts sphere sizes by radius.
RationalFunction orbit_growth_function();

// ---------------------------------------------------------------------------
// Fibonacci sphere law
// ---------------------------------------------------------------------------

/// Sphere sizes 1, 2, 3, 5, 8, ... via the integer recurrence
/// s_n = s_{n-1} + s_{n-2}.
BigInt fibonacci_sphere(int n);

/// Ball size = prefix sum of sphere sizes; equals fib(n+4) - 2 with the usual
/// Fibonacci numbering, which is the telescoped closed form over the integers.
BigInt ball_size(int n);

}  // namespace fdyadic
