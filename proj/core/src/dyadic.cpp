#include "fdyadic/dyadic.hpp"

#include <bit>
#include <stdexcept>

namespace fdyadic {

const char* generator_name(Generator g) {
    switch (g) {
        case Generator::A: return "a";
        case Generator::AInv: return "a^-1";
        case Generator::B: return "b";
        case Generator::BInv: return "b^-1";
    }
    return "?";
}

Generator parse_generator(const std::string& name) {
    if (name == "a") return Generator::A;
    if (name == "a^-1" || name == "a-1" || name == "A") return Generator::AInv;
    if (name == "b") return Generator::B;
    if (name == "b^-1" || name == "b-1" || name == "B") return Generator::BInv;
    throw std::invalid_argument("unknown generator: " + name);
}

// ---------------------------------------------------------------------------
// DyadicRational
// ---------------------------------------------------------------------------

DyadicRational::DyadicRational(BigInt numerator, unsigned exponent)
    : num_(std::move(numerator)), exp_(exponent) {
    if (num_ <= 0) throw std::invalid_argument("dyadic rational must be positive");
    while ((num_ & 1) == 0) {
        if (exp_ == 0) break;
        num_ >>= 1;
        --exp_;
    }
    if (exp_ == 0 || num_ >= (BigInt(1) << exp_))
        throw std::invalid_argument("dyadic rational must lie strictly inside (0,1)");
}

int DyadicRational::compare(const BigInt& p, unsigned q) const {
    BigInt lhs = num_ << q;
    BigInt rhs = p << exp_;
    return lhs.compare(rhs);
}

std::string DyadicRational::str() const {
    if (exp_ <= 24) return num_.str() + "/" + (BigInt(1) << exp_).str();
    return num_.str() + "/2^" + std::to_string(exp_);
}

DyadicRational parse_vertex(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty vertex");
    bool all_bits = true;
    for (char c : text)
        if (c != '0' && c != '1') all_bits = false;
    if (all_bits) return BitWord::from_string(text).to_rational();

    auto slash = text.find('/');
    if (slash == std::string::npos)
        throw std::invalid_argument("vertex must be a bit string or m/2^k fraction: " + text);
    BigInt num(text.substr(0, slash));
    std::string den = text.substr(slash + 1);
    unsigned exp = 0;
    if (den.rfind("2^", 0) == 0) {
        exp = static_cast<unsigned>(std::stoul(den.substr(2)));
    } else {
        BigInt d(den);
        if (d <= 0 || (d & (d - 1)) != 0)
            throw std::invalid_argument("denominator must be a power of two: " + text);
        exp = boost::multiprecision::msb(d);
    }
    return DyadicRational(num, exp);
}

// ---------------------------------------------------------------------------
// BitWord
// ---------------------------------------------------------------------------

BitWord BitWord::from_string(const std::string& bits) {
    BitWord w;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit words use only 0/1");
        w.bits_.push_back(c == '1' ? 1 : 0);
    }
    if (w.bits_.empty()) throw std::invalid_argument("empty bit word");
    w.strip_trailing_zeros();
    if (!w.canonical()) throw std::invalid_argument("bit word denotes a value outside (0,1)");
    return w;
}

BitWord BitWord::from_rational(const DyadicRational& x) {
    BitWord w;
    unsigned k = x.exponent();
    for (unsigned j = 0; j < k; ++j)
        w.bits_.push_back(static_cast<uint8_t>((x.numerator() >> (k - 1 - j)) & 1 ? 1 : 0));
    return w;
}

BitWord BitWord::from_packed(uint64_t code) {
    if (code < 2) throw std::invalid_argument("packed word must encode a nonempty word");
    int len = std::bit_width(code) - 1;
    BitWord w;
    for (int j = len - 1; j >= 0; --j)
        w.bits_.push_back(static_cast<uint8_t>((code >> j) & 1));
    return w;
}

DyadicRational BitWord::to_rational() const {
    if (!canonical()) throw std::logic_error("bit word not canonical");
    BigInt num = 0;
    for (uint8_t b : bits_) num = (num << 1) | static_cast<int>(b);
    return DyadicRational(std::move(num), static_cast<unsigned>(bits_.size()));
}

std::string BitWord::str() const {
    std::string s;
    s.reserve(bits_.size());
    for (uint8_t b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

uint64_t BitWord::to_packed() const {
    if (bits_.size() > 62) throw std::overflow_error("bit word too long to pack");
    uint64_t code = 1;
    for (uint8_t b : bits_) code = (code << 1) | b;
    return code;
}

// ---------------------------------------------------------------------------
// Action on fractions
// ---------------------------------------------------------------------------

namespace {

// x * 2^log2scale + tnum / 2^tlog2, exact.
DyadicRational affine(const DyadicRational& x, int log2scale, int tnum, unsigned tlog2) {
    long e1 = static_cast<long>(x.exponent()) - log2scale;
    long e = std::max(e1, static_cast<long>(tlog2));
    BigInt num = x.numerator() << static_cast<unsigned>(e - e1);
    if (tnum != 0) {
        BigInt t = BigInt(tnum) << static_cast<unsigned>(e - tlog2);
        num += t;
    }
    return DyadicRational(std::move(num), static_cast<unsigned>(e));
}

bool le(const DyadicRational& x, int p, unsigned q) { return x.compare(p, q) <= 0; }

}  // namespace

DyadicRational apply_rational(Generator g, const DyadicRational& x) {
    switch (g) {
        case Generator::A:
            if (le(x, 1, 1)) return affine(x, -1, 0, 0);      // x/2
            if (le(x, 3, 2)) return affine(x, 0, -1, 2);      // x - 1/4
            return affine(x, 1, -1, 0);                       // 2x - 1
        case Generator::AInv:
            if (le(x, 1, 2)) return affine(x, 1, 0, 0);       // 2x
            if (le(x, 1, 1)) return affine(x, 0, 1, 2);       // x + 1/4
            return affine(x, -1, 1, 1);                       // (x+1)/2
        case Generator::B:
            if (le(x, 1, 1)) return x;
            if (le(x, 3, 2)) return affine(x, -1, 1, 2);      // x/2 + 1/4
            if (le(x, 7, 3)) return affine(x, 0, -1, 3);      // x - 1/8
            return affine(x, 1, -1, 0);                       // 2x - 1
        case Generator::BInv:
            if (le(x, 1, 1)) return x;
            if (le(x, 5, 3)) return affine(x, 1, -1, 1);      // 2x - 1/2
            if (le(x, 3, 2)) return affine(x, 0, 1, 3);       // x + 1/8
            return affine(x, -1, 1, 1);                       // (x+1)/2
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Action on words
// ---------------------------------------------------------------------------

void apply_word_inplace(Generator g, BitWord& w) {
    auto ensure = [&w](size_t n) {
        while (w.size() < n) w.pad_back_zero();
    };
    switch (g) {
        case Generator::A:
            if (w[0] == 0) {
                w.push_front(0);  // 0w -> 00w
            } else {
                ensure(2);
                if (w[1] == 0) {  // 10w -> 01w
                    w.set(0, 0);
                    w.set(1, 1);
                } else {          // 11w -> 1w
                    w.pop_front();
                }
            }
            break;
        case Generator::AInv:
            if (w[0] == 1) {
                w.push_front(1);  // 1w -> 11w
            } else {
                ensure(2);
                if (w[1] == 0) {  // 00w -> 0w
                    w.pop_front();
                } else {          // 01w -> 10w
                    w.set(0, 1);
                    w.set(1, 0);
                }
            }
            break;
        case Generator::B:
            if (w[0] == 0) break;  // identity below 1/2
            ensure(2);
            if (w[1] == 0) {       // 10w -> 100w
                w.pop_front();
                w.push_front(0);
                w.push_front(0);
                w.push_front(1);
            } else {
                ensure(3);
                if (w[2] == 0) {   // 110w -> 101w
                    w.set(1, 0);
                    w.set(2, 1);
                } else {           // 111w -> 11w
                    w.pop_front();
                }
            }
            break;
        case Generator::BInv:
            if (w[0] == 0) break;
            ensure(2);
            if (w[1] == 1) {       // 11w -> 111w
                w.push_front(1);
            } else {
                ensure(3);
                if (w[2] == 0) {   // 100w -> 10w
                    w.pop_front();
                    w.pop_front();
                    w.pop_front();
                    w.push_front(0);
                    w.push_front(1);
                } else {           // 101w -> 110w
                    w.set(1, 1);
                    w.set(2, 0);
                }
            }
            break;
    }
    w.strip_trailing_zeros();
}

BitWord apply_word(Generator g, const BitWord& w) {
    BitWord out = w;
    apply_word_inplace(g, out);
    return out;
}

// ---------------------------------------------------------------------------
// Action on packed words
// ---------------------------------------------------------------------------

namespace {

inline uint64_t low_bits(uint64_t code, int n) {
    return code & ((uint64_t(1) << n) - 1);
}

// Assemble sentinel | prefix | tail where tail is the low tail_len bits.
inline uint64_t assemble(uint64_t prefix, int prefix_len, uint64_t tail, int tail_len) {
    return (((uint64_t(1) << prefix_len) | prefix) << tail_len) | tail;
}

inline uint64_t strip_zeros(uint64_t code) {
    return code >> std::countr_zero(code);
}

}  // namespace

uint64_t apply_packed(Generator g, uint64_t code) {
    int len = std::bit_width(code) - 1;
    if (len >= 62) throw std::overflow_error("packed word length exceeds 62 bits");
    if (len < 1) throw std::invalid_argument("packed word must be nonempty");
    auto bit = [&](int i) { return (code >> (len - 1 - i)) & 1; };
    auto pad = [&] {
        code <<= 1;
        ++len;
    };
    uint64_t out = 0;
    switch (g) {
        case Generator::A:
            if (bit(0) == 0) {
                out = assemble(0, 1, low_bits(code, len), len);
            } else {
                if (len < 2) pad();
                if (bit(1) == 0) out = assemble(0b01, 2, low_bits(code, len - 2), len - 2);
                else out = assemble(0b1, 1, low_bits(code, len - 2), len - 2);
            }
            break;
        case Generator::AInv:
            if (bit(0) == 1) {
                out = assemble(0b1, 1, low_bits(code, len), len);
            } else {
                if (len < 2) pad();
                if (bit(1) == 0) out = assemble(0b0, 1, low_bits(code, len - 2), len - 2);
                else out = assemble(0b10, 2, low_bits(code, len - 2), len - 2);
            }
            break;
        case Generator::B:
            if (bit(0) == 0) return code;
            if (len < 2) pad();
            if (bit(1) == 0) {
                out = assemble(0b100, 3, low_bits(code, len - 2), len - 2);
            } else {
                if (len < 3) pad();
                if (bit(2) == 0) out = assemble(0b101, 3, low_bits(code, len - 3), len - 3);
                else out = assemble(0b11, 2, low_bits(code, len - 3), len - 3);
            }
            break;
        case Generator::BInv:
            if (bit(0) == 0) return code;
            if (len < 2) pad();
            if (bit(1) == 1) {
                out = assemble(0b111, 3, low_bits(code, len - 2), len - 2);
            } else {
                if (len < 3) pad();
                if (bit(2) == 0) out = assemble(0b10, 2, low_bits(code, len - 3), len - 3);
                else out = assemble(0b110, 3, low_bits(code, len - 3), len - 3);
            }
            break;
    }
    return strip_zeros(out);
}

DyadicRational apply_sequence(const std::vector<Generator>& gs, DyadicRational x) {
    for (Generator g : gs) x = apply_rational(g, x);
    return x;
}

BitWord apply_sequence(const std::vector<Generator>& gs, BitWord w) {
    for (Generator g : gs) apply_word_inplace(g, w);
    return w;
}

}  // namespace fdyadic
