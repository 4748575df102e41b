#include "urlab/kernels.hpp"

#include <immintrin.h>

namespace urlab::kernels::avx2 {

__attribute__((target("avx2"))) std::uint64_t cover_block(std::uint64_t base, unsigned count,
                                                           std::span<const std::uint64_t> required) {
    std::uint64_t out = 0;
    const __m256i step = _mm256_set_epi64x(3, 2, 1, 0);
    unsigned k = 0;
    for (; k + 4 <= count; k += 4) {
        const __m256i m = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(base + k)), step);
        __m256i hit = _mm256_setzero_si256();
        for (std::uint64_t r : required) {
            const __m256i rv = _mm256_set1_epi64x(static_cast<long long>(r));
            hit = _mm256_or_si256(hit, _mm256_cmpeq_epi64(_mm256_and_si256(m, rv), rv));
            if (_mm256_movemask_pd(_mm256_castsi256_pd(hit)) == 0xF)
                break;
        }
        out |= static_cast<std::uint64_t>(_mm256_movemask_pd(_mm256_castsi256_pd(hit))) << k;
    }
    if (k < count)
        out |= scalar::cover_block(base + k, count - k, required) << k;
    return out;
}

__attribute__((target("avx2"))) void induced_connected(std::span<const std::uint64_t> adjacency, int source,
                                                        int sink, std::span<const std::uint64_t> masks,
                                                        std::span<std::uint8_t> out) {
    const std::size_t n = adjacency.size();
    const __m256i src = _mm256_set1_epi64x(static_cast<long long>(std::uint64_t{1} << source));
    const __m256i dst = _mm256_set1_epi64x(static_cast<long long>(std::uint64_t{1} << sink));
    std::size_t i = 0;
    for (; i + 4 <= masks.size(); i += 4) {
        const __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i *>(masks.data() + i));
        __m256i reach = _mm256_and_si256(src, m);
        for (;;) {
            __m256i next = reach;
            for (std::size_t v = 0; v < n; ++v) {
                const __m256i bit = _mm256_set1_epi64x(static_cast<long long>(std::uint64_t{1} << v));
                const __m256i has = _mm256_cmpeq_epi64(_mm256_and_si256(reach, bit), bit);
                const __m256i adj = _mm256_set1_epi64x(static_cast<long long>(adjacency[v]));
                next = _mm256_or_si256(next, _mm256_and_si256(has, adj));
            }
            next = _mm256_and_si256(next, m);
            const __m256i same = _mm256_cmpeq_epi64(next, reach);
            reach = next;
            if (_mm256_movemask_pd(_mm256_castsi256_pd(same)) == 0xF)
                break;
        }
        const __m256i ok = _mm256_cmpeq_epi64(_mm256_and_si256(reach, dst), dst);
        const int bits = _mm256_movemask_pd(_mm256_castsi256_pd(ok));
        for (int l = 0; l < 4; ++l)
            out[i + static_cast<std::size_t>(l)] = static_cast<std::uint8_t>((bits >> l) & 1);
    }
    if (i < masks.size())
        scalar::induced_connected(adjacency, source, sink, masks.subspan(i), out.subspan(i));
}

} // namespace urlab::kernels::avx2
