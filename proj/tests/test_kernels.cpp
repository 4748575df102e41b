#include "urlab/kernels.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace urlab::kernels;

TEST_CASE("cover_block: scalar and avx2 agree") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        std::vector<std::uint64_t> required(rng() % 12);
        for (auto &r : required)
            r = rng() & rng() & 0xFFFFFULL;
        std::uint64_t base = (rng() & 0xFFFFFULL) & ~63ULL;
        std::uint64_t s = scalar::cover_block(base, 64, required);
        std::uint64_t expected = 0;
        for (unsigned k = 0; k < 64; ++k)
            for (auto r : required)
                if (((base + k) & r) == r)
                    expected |= std::uint64_t{1} << k;
        CHECK(s == expected);
        if (isa_available(Isa::Avx2))
            CHECK(avx2::cover_block(base, 64, required) == s);
    }
}

TEST_CASE("induced_connected: scalar and avx2 agree") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + static_cast<int>(rng() % 10);
        std::vector<std::uint64_t> adj(static_cast<std::size_t>(n), 0);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (rng() % 3 == 0) {
                    adj[static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
                    adj[static_cast<std::size_t>(b)] |= std::uint64_t{1} << a;
                }
        std::vector<std::uint64_t> masks(37);
        for (auto &m : masks)
            m = rng() & ((std::uint64_t{1} << n) - 1);
        std::vector<std::uint8_t> s(masks.size()), v(masks.size());
        scalar::induced_connected(adj, 0, 1, masks, s);
        for (std::size_t i = 0; i < masks.size(); ++i) {
            std::uint64_t m = masks[i], reach = m & 1U, frontier = reach;
            while (frontier) {
                std::uint64_t next = 0;
                for (int x = 0; x < n; ++x)
                    if ((frontier >> x) & 1U)
                        next |= adj[static_cast<std::size_t>(x)];
                next &= m & ~reach;
                reach |= next;
                frontier = next;
            }
            CHECK(s[i] == (((m & 3U) == 3U && (reach & 2U)) ? 1 : 0));
        }
        if (isa_available(Isa::Avx2)) {
            avx2::induced_connected(adj, 0, 1, masks, v);
            CHECK(s == v);
        }
    }
}
