#pragma once

#include "fdyadic/numbers.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

namespace fdyadic {

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// The two standard generators of Thompson's group F and their inverses.
/// a rescales around 1/2, b is the identity on [0,1/2] and rescales around 3/4.
enum class Generator : uint8_t { A = 0, AInv = 1, B = 2, BInv = 3 };

constexpr std::array<Generator, 4> kGenerators = {Generator::A, Generator::AInv,
                                                  Generator::B, Generator::BInv};

constexpr Generator inverse(Generator g) {
    switch (g) {
        case Generator::A: return Generator::AInv;
        case Generator::AInv: return Generator::A;
        case Generator::B: return Generator::BInv;
        case Generator::BInv: return Generator::B;
    }
    return Generator::A;  // unreachable
}

const char* generator_name(Generator g);  // "a", "a^-1", "b", "b^-1"
Generator parse_generator(const std::string& name);

// ---------------------------------------------------------------------------
// DyadicRational
// ---------------------------------------------------------------------------

/// A dyadic rational strictly inside (0,1), kept canonical: odd numerator,
/// value numerator / 2^exponent. Canonical form makes structural equality
/// coincide with value equality.
class DyadicRational {
public:
    /// Canonicalizes (strips common powers of two). Throws std::invalid_argument
    /// unless 0 < numerator/2^exponent < 1.
    DyadicRational(BigInt numerator, unsigned exponent);

    static DyadicRational half() { return DyadicRational(1, 1); }

    const BigInt& numerator() const { return num_; }
    unsigned exponent() const { return exp_; }

    bool operator==(const DyadicRational& o) const {
        return exp_ == o.exp_ && num_ == o.num_;
    }
    bool operator!=(const DyadicRational& o) const { return !(*this == o); }

    /// Exact comparison with p/2^q (p, q need not be canonical).
    int compare(const BigInt& p, unsigned q) const;
    bool operator<(const DyadicRational& o) const { return compare(o.num_, o.exp_) < 0; }

    BigRational value() const { return BigRational(num_, BigInt(1) << exp_); }
    double to_double() const { return value().convert_to<double>(); }

    /// "m/2^k" when 2^k does not fit a plain decimal comfortably; for small
    /// exponents the usual decimal denominator ("3/8") is used.
    std::string str() const;

private:
    BigInt num_;
    unsigned exp_;
};

/// Accepts "m/8", "m/2^k", or a raw bit string such as "101".
DyadicRational parse_vertex(const std::string& text);

// ---------------------------------------------------------------------------
// BitWord
// ---------------------------------------------------------------------------

/// The binary expansion 0.b1 b2 ... bm of a dyadic rational, canonical form
/// ending in 1. Supports O(1) edits at both ends, which is what the prefix
/// rewriting rules of the generator action need; random walks keep their
/// state in this form since numerators grow without bound along long walks.
class BitWord {
public:
    BitWord() = default;  // empty words are not canonical; build via factories

    static BitWord from_string(const std::string& bits);
    static BitWord from_rational(const DyadicRational& x);
    /// Decode from the packed form produced by to_packed().
    static BitWord from_packed(uint64_t code);

    DyadicRational to_rational() const;
    std::string str() const;

    /// Packs as a sentinel-led integer: word b1..bm becomes the binary number
    /// 1 b1 b2 ... bm. Requires size() <= 62.
    uint64_t to_packed() const;

    size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    uint8_t operator[](size_t i) const { return bits_[i]; }
    const std::deque<uint8_t>& bits() const { return bits_; }

    bool canonical() const { return !bits_.empty() && bits_.back() == 1; }

    bool operator==(const BitWord& o) const { return bits_ == o.bits_; }
    bool operator!=(const BitWord& o) const { return bits_ != o.bits_; }

    // Mutating primitives used by the rewriting rules.
    void push_front(uint8_t b) { bits_.push_front(b); }
    void pop_front() { bits_.pop_front(); }
    void set(size_t i, uint8_t b) { bits_[i] = b; }
    void pad_back_zero() { bits_.push_back(0); }
    void strip_trailing_zeros() {
        while (bits_.size() > 1 && bits_.back() == 0) bits_.pop_back();
    }

private:
    std::deque<uint8_t> bits_;
};

// ---------------------------------------------------------------------------
// The action
// ---------------------------------------------------------------------------

/// Piecewise linear action on the fraction form.
/// a:  [0,1/2] -> x/2,   [1/2,3/4] -> x-1/4,  [3/4,1] -> 2x-1
/// b:  id on [0,1/2],    [1/2,3/4] -> x/2+1/4, [3/4,7/8] -> x-1/8, [7/8,1] -> 2x-1
/// Inverses are the inverse piecewise maps. Total on (0,1).
DyadicRational apply_rational(Generator g, const DyadicRational& x);

/// Same action as prefix rewriting on binary expansions:
///   a:   0w -> 00w,  10w -> 01w,  11w -> 1w
///   b:   0w -> 0w,   10w -> 100w, 110w -> 101w, 111w -> 11w
/// (inverses reversed). Breakpoints are handled by zero-padding before
/// matching and re-canonicalizing after.
void apply_word_inplace(Generator g, BitWord& w);
BitWord apply_word(Generator g, const BitWord& w);

/// The rewriting rules on the packed uint64 form; the hot path for BFS.
/// Requires the result to stay within 62 bits (caller bounds word length).
uint64_t apply_packed(Generator g, uint64_t code);

/// Left-to-right composition: apply_sequence({g1,g2}, x) = g2(g1(x)).
DyadicRational apply_sequence(const std::vector<Generator>& gs, DyadicRational x);
BitWord apply_sequence(const std::vector<Generator>& gs, BitWord w);

}  // namespace fdyadic

template <>
struct std::hash<fdyadic::BitWord> {
    size_t operator()(const fdyadic::BitWord& w) const {
        size_t h = 1469598103934665603ull;
        for (uint8_t b : w.bits()) h = (h ^ (b + 2)) * 1099511628211ull;
        return h;
    }
};
