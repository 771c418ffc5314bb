#pragma once

#include "rpfree/f2algebra.hpp"
#include "rpfree/quadforms.hpp"

#include <random>

namespace rpfree::test {

inline PolyF2 px(const char* text, int r)
{
    return parse_poly(text, RingDescriptor::free_x(r));
}

inline QuadraticForm qf(const char* text, int r)
{
    return QuadraticForm::from_poly(px(text, r));
}

inline PolyF2 random_poly(std::mt19937_64& rng, const RingDescriptor& ring, int max_degree, int terms)
{
    std::vector<Monomial> ms;
    for (int i = 0; i < terms; ++i) {
        Monomial m;
        int d = static_cast<int>(rng() % static_cast<unsigned>(max_degree + 1));
        while (d-- > 0)
            m.exp[rng() % static_cast<unsigned>(ring.nvars())] += 1;
        if (m.respects(ring))
            ms.push_back(m);
    }
    return PolyF2(ring, ms);
}

}  // namespace rpfree::test
