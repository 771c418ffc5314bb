#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

using namespace rpfree;
using rpfree::test::px;

TEST_CASE("addition")
{
    CHECK((px("x1", 1) + px("x1", 1)).is_zero());
    CHECK(px("x1+x2", 2) + px("x2", 2) == px("x1", 2));
    const auto ring = RingDescriptor::truncated_t({3});
    CHECK(to_string(parse_poly("t1^2", ring) + parse_poly("t1^3", ring)) == "t1^2 + t1^3");
    CHECK_THROWS_AS(px("x1", 2) + px("x1", 3), RingMismatch);
}

TEST_CASE("multiplication")
{
    CHECK(px("(x1+x2)*(x1+x2)", 2) == px("x1^2+x2^2", 2));
    CHECK(to_string(px("x1*x2", 2) * px("x1+x2", 2)) == "x1^2*x2 + x1*x2^2");
    const auto ring = RingDescriptor::truncated_t({3});
    CHECK((parse_poly("t1", ring) * parse_poly("t1^3", ring)).is_zero());
}

TEST_CASE("rendering and parsing")
{
    CHECK(to_string(PolyF2::zero(RingDescriptor::free_x(2))) == "0");
    CHECK(to_string(px("x2*x1^2 + x1*x2^2 + x1*x2*x2", 2)) == "x1^2*x2");
    CHECK(to_string(px("1 + x1", 1)) == "1 + x1");
    CHECK(px("3*x1", 1) == px("x1", 1));
    CHECK(px("2*x1", 1).is_zero());
    CHECK_THROWS_AS(px("x3", 2), ParseError);
    CHECK_THROWS_AS(px("x1 +", 2), ParseError);
    CHECK_THROWS_AS(px("(x1", 2), ParseError);
    const auto big = RingDescriptor::bigraded(2, {3, 2});
    CHECK(to_string(parse_poly("x2*t1 + t2^2*x1", big)) == "x2*t1 + x1*t2^2");
}

TEST_CASE("monomial order is graded with the last variable deciding")
{
    const auto ring = RingDescriptor::free_x(3);
    const auto ms = monomials_of_degree(ring, 2);
    REQUIRE(ms.size() == 6);
    CHECK(to_string(ms.front(), ring) == "x1^2");
    CHECK(to_string(ms[1], ring) == "x1*x2");
    CHECK(to_string(ms.back(), ring) == "x3^2");
    for (std::size_t i = 1; i < ms.size(); ++i)
        CHECK(monomial_less(ms[i - 1], ms[i]));
}

TEST_CASE("sq1")
{
    CHECK(to_string(sq1(px("x1*x2", 2))) == "x1^2*x2 + x1*x2^2");
    CHECK(sq1(px("x1^2", 1)).is_zero());
    CHECK(sq1(px("x1^2+x1*x2+x2^2", 2)) == px("x1^2*x2+x1*x2^2", 2));
    // truncated ring: applied then capped
    const auto ring = RingDescriptor::truncated_t({2});
    CHECK(sq1(parse_poly("t1^2", ring)).is_zero());
    CHECK(to_string(sq1(parse_poly("t1", ring))) == "t1^2");
}

TEST_CASE("evaluate")
{
    const std::uint8_t p11[] = {1, 1};
    CHECK(evaluate(px("x1*x2", 2), p11));
    CHECK_FALSE(evaluate(px("(x1+x2)^2", 2), p11));
    const auto q = px("x1^2+x1*x2+x2^2", 2);
    for (std::uint64_t pt : {1ULL, 2ULL, 3ULL})
        CHECK(evaluate_bits(q, pt));
    const std::uint8_t bad[] = {1};
    CHECK_THROWS(evaluate(q, bad));
}

TEST_CASE("substitute")
{
    const LinearForm y(1, 1);
    const LinearForm same[] = {y, y};
    CHECK(to_string(substitute(px("x1*x2", 2), same)) == "x1^2");
    const LinearForm kill[] = {LinearForm(2, 1), LinearForm(2, 0)};
    CHECK(substitute(px("x1*x2", 2), kill).is_zero());
    const LinearForm change[] = {LinearForm(2, 3), LinearForm(2, 2)};
    CHECK(substitute(px("x1^2+x1*x2+x2^2", 2), change) == px("x1^2+x1*x2+x2^2", 2));
    const LinearForm one[] = {y};
    CHECK_THROWS(substitute(px("x1*x2", 2), one));
}

TEST_CASE("ideal membership in a window")
{
    const auto a = px("x1*x2", 2);
    const PolyF2 gens[] = {a};
    auto res = ideal_membership_window(sq1(a), gens, 3);
    REQUIRE(res.member);
    CHECK(res.witness[0] == px("x1+x2", 2));

    const PolyF2 g1[] = {px("x1+x2", 2)};
    res = ideal_membership_window(PolyF2::zero(RingDescriptor::free_x(2)), g1, 2);
    CHECK(res.member);
    CHECK(res.witness[0].is_zero());

    const PolyF2 g2[] = {px("x2^2", 2)};
    CHECK_FALSE(ideal_membership_window(px("x1^2", 2), g2, 2).member);
}

TEST_CASE("linear forms")
{
    const LinearForm l(3, 0b101);
    CHECK(l.to_string() == "x1 + x3");
    CHECK(LinearForm::from_poly(px("x1+x3", 3)) == l);
    CHECK_FALSE(LinearForm::from_poly(px("x1^2", 3)).has_value());
    CHECK(l.evaluate(0b001));
    CHECK_FALSE(l.evaluate(0b101));
}

TEST_CASE("ring laws on random inputs")
{
    std::mt19937_64 rng(2024);
    const auto ring = RingDescriptor::free_x(3);
    const auto capped = RingDescriptor::bigraded(2, {3, 2});
    for (int trial = 0; trial < 300; ++trial) {
        const auto& R = trial % 2 ? ring : capped;
        const auto a = test::random_poly(rng, R, 4, 5);
        const auto b = test::random_poly(rng, R, 4, 5);
        const auto c = test::random_poly(rng, R, 3, 4);
        CHECK((a + a).is_zero());
        CHECK(a + PolyF2::zero(R) == a);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        const PolyF2 aa = a * a;
        for (const auto& m : aa.terms())
            for (int v = 0; v < R.nvars(); ++v)
                CHECK(m.exp[static_cast<std::size_t>(v)] % 2 == 0);
        CHECK(sq1(sq1(a)).is_zero());
        if (&R == &ring) {
            // the derivation law holds in the free ring
            CHECK(sq1(a * b) == sq1(a) * b + a * sq1(b));
            for (std::uint64_t pt = 0; pt < 8; ++pt)
                CHECK(evaluate_bits(a * b, pt) == (evaluate_bits(a, pt) && evaluate_bits(b, pt)));
        }
        // the canonical form is sorted and duplicate-free
        for (std::size_t i = 1; i < a.terms().size(); ++i)
            CHECK(monomial_less(a.terms()[i - 1], a.terms()[i]));
    }
}

TEST_CASE("membership witnesses reconstruct the target")
{
    std::mt19937_64 rng(5);
    const auto ring = RingDescriptor::free_x(3);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<PolyF2> gens;
        for (int i = 0; i < 2; ++i) {
            std::vector<Monomial> ms;
            for (const auto& m : monomials_of_degree(ring, 2))
                if (rng() & 1U)
                    ms.push_back(m);
            gens.emplace_back(ring, ms);
        }
        std::vector<Monomial> ms;
        for (const auto& m : monomials_of_degree(ring, 3))
            if (rng() & 1U)
                ms.push_back(m);
        const PolyF2 p(ring, ms);
        const auto res = ideal_membership_window(p, gens, 3);
        if (res.member) {
            PolyF2 sum = PolyF2::zero(ring);
            for (std::size_t i = 0; i < gens.size(); ++i)
                sum += res.witness[i] * gens[i];
            CHECK(sum == p);
        }
    }
}
