#include "urlab/kernels.hpp"

namespace urlab::kernels::scalar {

std::uint64_t cover_block(std::uint64_t base, unsigned count, std::span<const std::uint64_t> required) {
    std::uint64_t out = 0;
    for (unsigned k = 0; k < count; ++k) {
        const std::uint64_t m = base + k;
        for (std::uint64_t r : required) {
            if ((m & r) == r) {
                out |= std::uint64_t{1} << k;
                break;
            }
        }
    }
    return out;
}

void induced_connected(std::span<const std::uint64_t> adjacency, int source, int sink,
                       std::span<const std::uint64_t> masks, std::span<std::uint8_t> out) {
    const std::uint64_t src = std::uint64_t{1} << source;
    const std::uint64_t dst = std::uint64_t{1} << sink;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const std::uint64_t m = masks[i];
        if (!(m & src) || !(m & dst)) {
            out[i] = 0;
            continue;
        }
        std::uint64_t reach = src;
        std::uint64_t frontier = src;
        while (frontier && !(reach & dst)) {
            std::uint64_t next = 0;
            for (std::uint64_t f = frontier; f; f &= f - 1)
                next |= adjacency[static_cast<std::size_t>(__builtin_ctzll(f))];
            next &= m & ~reach;
            reach |= next;
            frontier = next;
        }
        out[i] = (reach & dst) ? 1 : 0;
    }
}

} // namespace urlab::kernels::scalar
