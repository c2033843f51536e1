#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nsdde/grid.hpp"

namespace nsdde {

/// Identifier of the pinned increment generator. Bumped whenever the bit
/// stream produced for a given (seed, path_index, grid) changes.
inline constexpr const char* kBrownianAlgorithm = "splitmix64-key/mt19937_64/box-muller-v1";

/// Increments dB_l = B(t_{l+1}) - B(t_l), l = 0..M-1, of an m-dimensional
/// Brownian motion on the [0, T] part of a grid.
class BrownianPath {
public:
    /// Wraps externally supplied increments (row-major [step][component]).
    /// The path is treated as generated on `grid` itself.
    static BrownianPath from_increments(const DelayGrid& grid, int noise_dim,
                                        std::vector<double> increments);

    const DelayGrid& grid() const noexcept { return grid_; }
    int noise_dim() const noexcept { return noise_dim_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t path_index() const noexcept { return path_index_; }

    /// Total steps M of the grid the increments were originally drawn on.
    /// Preserved by coarsen(); two paths with equal seed, path_index and
    /// origin_steps describe the same Brownian realization.
    std::int64_t origin_steps() const noexcept { return origin_steps_; }

    std::span<const double> increment(std::int64_t l) const;
    std::span<const double> data() const noexcept { return increments_; }

    friend BrownianPath generate(const DelayGrid&, int, std::uint64_t, std::uint64_t);
    friend BrownianPath coarsen(const BrownianPath&, std::int64_t);

private:
    BrownianPath(DelayGrid grid, int noise_dim, std::uint64_t seed, std::uint64_t path_index,
                 std::int64_t origin_steps, std::vector<double> increments);

    DelayGrid grid_;
    int noise_dim_;
    std::uint64_t seed_;
    std::uint64_t path_index_;
    std::int64_t origin_steps_;
    std::vector<double> increments_;
};

/// 64-bit key of the stream for replicate path_index under seed.
std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t path_index);

/// Draws every increment component independently from Normal(0, step).
/// Deterministic in (grid, noise_dim, seed, path_index) and independent of
/// the order in which paths are generated.
BrownianPath generate(const DelayGrid& grid, int noise_dim, std::uint64_t seed,
                      std::uint64_t path_index);

/// Sums consecutive blocks of `factor` increments, giving the same
/// realization on the grid with step factor * step. Throws
/// IncompatibleFactor unless factor >= 2 divides both N and M.
BrownianPath coarsen(const BrownianPath& path, std::int64_t factor);

/// Writes increments as little-endian IEEE-754 doubles, row-major
/// [step][component].
void write_increments_binary(std::ostream& out, const BrownianPath& path);

}  // namespace nsdde
