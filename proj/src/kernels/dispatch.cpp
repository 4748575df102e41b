#include "urlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace urlab::kernels {

const char *isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
    if (isa == Isa::Scalar)
        return true;
    return __builtin_cpu_supports("avx2");
}

Isa active_isa() {
    static const Isa chosen = [] {
        const char *env = std::getenv("URLAB_ISA");
        if (env != nullptr && std::strcmp(env, "scalar") == 0)
            return Isa::Scalar;
        return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
    }();
    return chosen;
}

std::uint64_t cover_block(Isa isa, std::uint64_t base, unsigned count, std::span<const std::uint64_t> required) {
    if (required.empty() || count == 0)
        return 0;
    if (isa == Isa::Avx2)
        return avx2::cover_block(base, count, required);
    return scalar::cover_block(base, count, required);
}

void induced_connected(Isa isa, std::span<const std::uint64_t> adjacency, int source, int sink,
                       std::span<const std::uint64_t> masks, std::span<std::uint8_t> out) {
    if (isa == Isa::Avx2)
        avx2::induced_connected(adjacency, source, sink, masks, out);
    else
        scalar::induced_connected(adjacency, source, sink, masks, out);
}

} // namespace urlab::kernels
