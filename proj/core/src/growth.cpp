#include "fdyadic/growth.hpp"

#include "fdyadic/errors.hpp"

#include <stdexcept>

namespace fdyadic {

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

Polynomial::Polynomial(std::initializer_list<long> coeffs) {
    for (long c : coeffs) coeffs_.emplace_back(c);
    trim();
}

Polynomial::Polynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

int Polynomial::term_count() const {
    int n = 0;
    for (const BigInt& c : coeffs_)
        if (c != 0) ++n;
    return n;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<BigInt> out(std::max(coeffs_.size(), o.coeffs_.size()), BigInt(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
    std::vector<BigInt> out = coeffs_;
    for (BigInt& c : out) c = -c;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<BigInt> out(coeffs_.size() + o.coeffs_.size() - 1, BigInt(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::scaled(const BigInt& s) const {
    std::vector<BigInt> out = coeffs_;
    for (BigInt& c : out) c *= s;
    return Polynomial(std::move(out));
}

BigInt Polynomial::content() const {
    BigInt g = 0;
    for (const BigInt& c : coeffs_) g = boost::multiprecision::gcd(g, c);
    return g < 0 ? BigInt(-g) : g;
}

Polynomial Polynomial::primitive_part() const {
    BigInt g = content();
    if (g == 0 || g == 1) return *this;
    std::vector<BigInt> out = coeffs_;
    for (BigInt& c : out) c /= g;
    return Polynomial(std::move(out));
}

namespace {

// Pseudo-remainder of a by b: lc(b)^(deg a - deg b + 1) * a reduced mod b.
Polynomial pseudo_rem(Polynomial a, const Polynomial& b) {
    int db = b.degree();
    const BigInt lc = b.coeff(db);
    while (!a.is_zero() && a.degree() >= db) {
        int shift = a.degree() - db;
        BigInt top = a.coeff(a.degree());
        std::vector<BigInt> scaled_a;
        scaled_a.reserve(a.degree() + 1);
        for (int i = 0; i <= a.degree(); ++i) scaled_a.push_back(a.coeff(i) * lc);
        std::vector<BigInt> sub(a.degree() + 1, BigInt(0));
        for (int i = 0; i <= db; ++i) sub[i + shift] = b.coeff(i) * top;
        for (int i = 0; i <= a.degree(); ++i) scaled_a[i] -= sub[i];
        a = Polynomial(std::move(scaled_a));
    }
    return a;
}

}  // namespace

Polynomial Polynomial::gcd(Polynomial a, Polynomial b) {
    a = a.primitive_part();
    b = b.primitive_part();
    while (!b.is_zero()) {
        Polynomial r = pseudo_rem(a, b).primitive_part();
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero() && a.coeff(a.degree()) < 0) a = -a;
    return a;
}

Polynomial Polynomial::div_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.is_zero()) return {};
    int da = a.degree(), db = b.degree();
    if (da < db) throw std::domain_error("inexact polynomial division");
    std::vector<BigInt> rem(a.coeffs());
    std::vector<BigInt> quot(da - db + 1, BigInt(0));
    const BigInt& lead = b.coeff(db);
    for (int i = da - db; i >= 0; --i) {
        BigInt top = rem[i + db];
        if (top == 0) continue;
        if (top % lead != 0) throw std::domain_error("inexact polynomial division");
        BigInt q = top / lead;
        quot[i] = q;
        for (int j = 0; j <= db; ++j) rem[i + j] -= q * b.coeff(j);
    }
    for (const BigInt& c : rem)
        if (c != 0) throw std::domain_error("inexact polynomial division");
    return Polynomial(std::move(quot));
}

std::string Polynomial::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = 0; i <= degree(); ++i) {
        const BigInt& c = coeffs_[i];
        if (c == 0) continue;
        bool negative = c < 0;
        BigInt mag = negative ? BigInt(-c) : c;
        std::string term;
        if (i == 0) {
            term = mag.str();
        } else {
            std::string power = i == 1 ? var : var + "^" + std::to_string(i);
            term = (mag == 1) ? power : mag.str() + power;
        }
        if (out.empty()) {
            out = negative ? "-" + term : term;
        } else {
            out += negative ? "-" + term : "+" + term;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// RationalFunction
// ---------------------------------------------------------------------------

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = Polynomial::one();
        return;
    }
    Polynomial g = Polynomial::gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = Polynomial::div_exact(num_, g);
        den_ = Polynomial::div_exact(den_, g);
    }
    BigInt c = boost::multiprecision::gcd(num_.content(), den_.content());
    if (c > 1) {
        auto divide = [&c](const Polynomial& p) {
            std::vector<BigInt> v = p.coeffs();
            for (BigInt& x : v) x /= c;
            return Polynomial(std::move(v));
        };
        num_ = divide(num_);
        den_ = divide(den_);
    }
    if (den_.coeff(0) == 0)
        throw std::domain_error("denominator vanishes at 0; not expandable");
    if (den_.coeff(0) < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

std::vector<BigRational> RationalFunction::expand(int n) const {
    if (den_.coeff(0) == 0) throw std::domain_error("not expandable at 0");
    std::vector<BigRational> c(n + 1, BigRational(0));
    BigRational q0(den_.coeff(0));
    for (int i = 0; i <= n; ++i) {
        BigRational acc(num_.coeff(i));
        for (int k = 1; k <= std::min(i, den_.degree()); ++k)
            acc -= BigRational(den_.coeff(k)) * c[i - k];
        c[i] = acc / q0;
    }
    return c;
}

std::string RationalFunction::str(const std::string& var) const {
    auto wrap = [&](const Polynomial& p) {
        std::string s = p.str(var);
        return p.term_count() > 1 ? "(" + s + ")" : s;
    };
    if (den_ == Polynomial::one()) return num_.str(var);
    return wrap(num_) + "/" + wrap(den_);
}

// ---------------------------------------------------------------------------
// Transfer matrices
// ---------------------------------------------------------------------------

TransferMatrix TransferMatrix::word_counts() {
    // Continuations per class: 0 steps into {1,3}; 1 into {1}; 2 into {1,2,3};
    // 3 into {2} and twice into {4} (a parallel pair); 4 twice into {4}.
    return {Role::WordCount,
            {{{0, 1, 0, 1, 0},
              {0, 1, 0, 0, 0},
              {0, 1, 1, 1, 0},
              {0, 0, 1, 0, 2},
              {0, 0, 0, 0, 2}}}};
}

TransferMatrix TransferMatrix::point_counts() {
    return {Role::PointCount,
            {{{0, 1, 0, 1, 0},
              {0, 1, 0, 0, 0},
              {0, 1, 1, 1, 0},
              {0, 0, 1, 0, 1},
              {0, 0, 0, 0, 1}}}};
}

std::vector<CountVector> recurrence_series(const TransferMatrix& m, int n) {
    std::vector<CountVector> out;
    out.reserve(n + 1);
    CountVector v;
    v.fill(BigInt(1));
    out.push_back(v);
    for (int step = 1; step <= n; ++step) {
        CountVector next;
        for (int i = 0; i < kConeTypeCount; ++i) {
            BigInt acc = 0;
            for (int j = 0; j < kConeTypeCount; ++j)
                if (m.entries[i][j] != 0) acc += m.entries[i][j] * v[j];
            next[i] = acc;
        }
        v = next;
        out.push_back(v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Resolvents
// ---------------------------------------------------------------------------

namespace {

/// Determinant by fraction-free (Bareiss) elimination; exact over Z[z].
Polynomial determinant(std::vector<std::vector<Polynomial>> m) {
    const size_t n = m.size();
    if (n == 0) return Polynomial::one();
    int sign = 1;
    Polynomial prev = Polynomial::one();
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == n) return {};
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                m[i][j] = Polynomial::div_exact(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
        prev = m[k][k];
    }
    Polynomial det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

}  // namespace

std::vector<RationalFunction> resolvent_vector(const std::vector<std::vector<BigInt>>& m,
                                               const std::vector<BigInt>& v0) {
    const size_t n = m.size();
    if (v0.size() != n) throw std::invalid_argument("resolvent: size mismatch");
    // System (I - Mz) u = v0, solved by Cramer over Z[z].
    std::vector<std::vector<Polynomial>> sys(n, std::vector<Polynomial>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::vector<BigInt> coeffs{BigInt(i == j ? 1 : 0), -m[i][j]};
            sys[i][j] = Polynomial(std::move(coeffs));
        }
    Polynomial det = determinant(sys);
    if (det.is_zero()) throw VerificationError("resolvent: singular system");
    std::vector<RationalFunction> out;
    out.reserve(n);
    for (size_t col = 0; col < n; ++col) {
        auto replaced = sys;
        for (size_t i = 0; i < n; ++i) replaced[i][col] = Polynomial(std::vector<BigInt>{v0[i]});
        out.emplace_back(determinant(replaced), det);
    }
    return out;
}

std::vector<RationalFunction> resolvent_vector(const TransferMatrix& m) {
    std::vector<std::vector<BigInt>> entries(kConeTypeCount,
                                             std::vector<BigInt>(kConeTypeCount));
    for (int i = 0; i < kConeTypeCount; ++i)
        for (int j = 0; j < kConeTypeCount; ++j) entries[i][j] = m.entries[i][j];
    return resolvent_vector(entries, std::vector<BigInt>(kConeTypeCount, BigInt(1)));
}

RationalFunction geodesic_growth_function() {
    return resolvent_vector(TransferMatrix::word_counts())[0];
}

RationalFunction orbit_growth_function() {
    return resolvent_vector(TransferMatrix::point_counts())[0];
}

// ---------------------------------------------------------------------------
// Fibonacci sphere law
// ---------------------------------------------------------------------------

BigInt fibonacci_sphere(int n) {
    if (n < 0) throw std::invalid_argument("sphere index must be nonnegative");
    BigInt a = 1, b = 2;  // s_0, s_1
    if (n == 0) return a;
    for (int i = 1; i < n; ++i) {
        BigInt next = a + b;
        a = b;
        b = next;
    }
    return b;
}

BigInt ball_size(int n) {
    BigInt total = 0;
    BigInt a = 1, b = 2;
    for (int i = 0; i <= n; ++i) {
        total += a;
        BigInt next = a + b;
        a = b;
        b = next;
    }
    return total;
}

}  // namespace fdyadic
