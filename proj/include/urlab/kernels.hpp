#pragma once

#include <cstdint>
#include <span>

namespace urlab::kernels {

enum class Isa { Scalar, Avx2 };

const char *isa_name(Isa isa);
bool isa_available(Isa isa);
/// Best available ISA; URLAB_ISA=scalar forces the scalar kernels.
Isa active_isa();

/// Bit k of the result is set iff mask (base + k) is a superset of some
/// mask in `required`. Requires count <= 64.
std::uint64_t cover_block(Isa isa, std::uint64_t base, unsigned count, std::span<const std::uint64_t> required);
inline std::uint64_t cover_block(std::uint64_t base, unsigned count, std::span<const std::uint64_t> required) {
    return cover_block(active_isa(), base, count, required);
}

/// For each vertex mask, out[i] = 1 iff source and sink are in masks[i] and
/// connected in the subgraph induced by masks[i]. adjacency[v] is the
/// neighbour mask of vertex v; at most 64 vertices.
void induced_connected(Isa isa, std::span<const std::uint64_t> adjacency, int source, int sink,
                       std::span<const std::uint64_t> masks, std::span<std::uint8_t> out);
inline void induced_connected(std::span<const std::uint64_t> adjacency, int source, int sink,
                              std::span<const std::uint64_t> masks, std::span<std::uint8_t> out) {
    induced_connected(active_isa(), adjacency, source, sink, masks, out);
}

namespace scalar {
std::uint64_t cover_block(std::uint64_t base, unsigned count, std::span<const std::uint64_t> required);
void induced_connected(std::span<const std::uint64_t> adjacency, int source, int sink,
                       std::span<const std::uint64_t> masks, std::span<std::uint8_t> out);
} // namespace scalar

namespace avx2 {
std::uint64_t cover_block(std::uint64_t base, unsigned count, std::span<const std::uint64_t> required);
void induced_connected(std::span<const std::uint64_t> adjacency, int source, int sink,
                       std::span<const std::uint64_t> masks, std::span<std::uint8_t> out);
} // namespace avx2

} // namespace urlab::kernels
