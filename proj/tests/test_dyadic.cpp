#include "fdyadic/dyadic.hpp"

#include <doctest.h>

#include <random>

using namespace fdyadic;

namespace {

DyadicRational dy(long num, unsigned exp) { return DyadicRational(BigInt(num), exp); }

DyadicRational random_dyadic(std::mt19937_64& rng, unsigned max_exp) {
    std::uniform_int_distribution<unsigned> exp_dist(1, max_exp);
    unsigned k = exp_dist(rng);
    std::uniform_int_distribution<uint64_t> num_dist(0, (uint64_t(1) << (k - 1)) - 1);
    BigInt num = 2 * BigInt(num_dist(rng)) + 1;  // odd, < 2^k
    return DyadicRational(num, k);
}

}  // namespace

TEST_CASE("canonical representation") {
    CHECK(dy(6, 4) == dy(3, 3));  // 6/16 = 3/8
    CHECK(dy(1, 1).str() == "1/2");
    CHECK(dy(3, 3).str() == "3/8");
    CHECK_THROWS_AS(dy(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(dy(8, 3), std::invalid_argument);   // value 1
    CHECK_THROWS_AS(dy(9, 3), std::invalid_argument);   // value > 1
}

TEST_CASE("vertex parsing accepts fractions and bit words") {
    CHECK(parse_vertex("3/8") == dy(3, 3));
    CHECK(parse_vertex("3/2^3") == dy(3, 3));
    CHECK(parse_vertex("011") == dy(3, 3));
    CHECK(parse_vertex("1") == dy(1, 1));
    CHECK(parse_vertex("6/16") == dy(3, 3));
    CHECK_THROWS_AS(parse_vertex("3/7"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vertex(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_vertex("abc"), std::invalid_argument);
}

TEST_CASE("word round trips") {
    for (const char* s : {"1", "01", "101", "0011", "110001"}) {
        BitWord w = BitWord::from_string(s);
        CHECK(w.str() == s);
        CHECK(BitWord::from_rational(w.to_rational()) == w);
        CHECK(BitWord::from_packed(w.to_packed()) == w);
    }
    CHECK(BitWord::from_string("100").str() == "1");  // trailing zeros stripped
    CHECK_THROWS_AS(BitWord::from_string("00"), std::invalid_argument);
    CHECK_THROWS_AS(BitWord::from_string("012"), std::invalid_argument);
}

TEST_CASE("generator action on fractions") {
    CHECK(apply_rational(Generator::A, dy(1, 1)) == dy(1, 2));        // a(1/2) = 1/4
    CHECK(apply_rational(Generator::B, dy(1, 2)) == dy(1, 2));        // b fixes 1/4
    CHECK(apply_rational(Generator::AInv, dy(5, 3)) == dy(13, 4));    // a^-1(5/8) = 13/16
    CHECK(apply_rational(Generator::BInv, dy(5, 3)) == dy(3, 2));     // b^-1(5/8) = 3/4
    CHECK(apply_rational(Generator::AInv, dy(1, 1)) == dy(3, 2));     // a^-1(1/2) = 3/4
    CHECK(apply_rational(Generator::B, dy(3, 2)) == dy(5, 3));        // b(3/4) = 5/8
}

TEST_CASE("generator action on words") {
    auto w = [](const char* s) { return BitWord::from_string(s); };
    CHECK(apply_word(Generator::A, w("1")) == w("01"));
    CHECK(apply_word(Generator::AInv, w("11")) == w("111"));
    CHECK(apply_word(Generator::BInv, w("11")) == w("111"));  // the parallel edge
    CHECK(apply_word(Generator::B, w("11")) == w("101"));
    CHECK(apply_word(Generator::B, w("1")) == w("1"));        // loop at 1/2
    CHECK(apply_word(Generator::A, w("111")) == w("11"));
    CHECK(apply_word(Generator::B, w("111")) == w("11"));     // a = b on [7/8, 1)
}

TEST_CASE("sequences compose left to right") {
    CHECK(apply_sequence({}, dy(1, 1)) == dy(1, 1));
    CHECK(apply_sequence({Generator::AInv, Generator::B, Generator::A}, dy(1, 1)) == dy(3, 3));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        DyadicRational x = random_dyadic(rng, 24);
        CHECK(apply_sequence({Generator::A, Generator::AInv}, x) == x);
    }
}

TEST_CASE("inverse law") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        DyadicRational x = random_dyadic(rng, 20);
        for (Generator g : kGenerators) {
            CHECK(apply_rational(inverse(g), apply_rational(g, x)) == x);
            CHECK(inverse(inverse(g)) == g);
        }
    }
}

TEST_CASE("the three action forms agree") {
    // Exhaustive through exponent 12, sampled through exponent 20.
    for (unsigned k = 1; k <= 12; ++k) {
        for (uint64_t m = 1; m < (uint64_t(1) << k); m += 2) {
            DyadicRational x(BigInt(m), k);
            BitWord w = BitWord::from_rational(x);
            for (Generator g : kGenerators) {
                BitWord via_word = apply_word(g, w);
                CHECK(via_word == BitWord::from_rational(apply_rational(g, x)));
                CHECK(apply_packed(g, w.to_packed()) == via_word.to_packed());
            }
        }
    }
    std::mt19937_64 rng(13);
    for (int i = 0; i < 3000; ++i) {
        DyadicRational x = random_dyadic(rng, 20);
        BitWord w = BitWord::from_rational(x);
        for (Generator g : kGenerators) {
            BitWord via_word = apply_word(g, w);
            CHECK(via_word == BitWord::from_rational(apply_rational(g, x)));
            CHECK(apply_packed(g, w.to_packed()) == via_word.to_packed());
        }
    }
}

TEST_CASE("fixed points: b pins exactly the lower half, a pins nothing") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 3000; ++i) {
        DyadicRational x = random_dyadic(rng, 18);
        bool low = x.compare(1, 1) <= 0;
        CHECK((apply_rational(Generator::B, x) == x) == low);
        CHECK((apply_rational(Generator::BInv, x) == x) == low);
        CHECK(apply_rational(Generator::A, x) != x);
        CHECK(apply_rational(Generator::AInv, x) != x);
    }
}

TEST_CASE("exponent moves by at most one") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 3000; ++i) {
        DyadicRational x = random_dyadic(rng, 18);
        for (Generator g : kGenerators) {
            DyadicRational y = apply_rational(g, x);
            int diff = static_cast<int>(y.exponent()) - static_cast<int>(x.exponent());
            CHECK(diff >= -1);
            CHECK(diff <= 1);
        }
    }
}

TEST_CASE("long walks grow exponents safely") {
    // A crude walk that keeps applying a^-1 then b; exponents climb into the
    // hundreds, which is the regime the word form exists for.
    DyadicRational x = dy(1, 1);
    BitWord w = BitWord::from_rational(x);
    for (int i = 0; i < 300; ++i) {
        Generator g = (i % 2) ? Generator::B : Generator::AInv;
        x = apply_rational(g, x);
        apply_word_inplace(g, w);
    }
    CHECK(w == BitWord::from_rational(x));
    CHECK(x.exponent() > 100);
}
