#include "nsdde/brownian.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <ostream>
#include <random>
#include <utility>

#include "nsdde/error.hpp"

namespace nsdde {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform on (0, 1] with 53 random bits.
double open_unit(std::mt19937_64& engine) {
    return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

BrownianPath::BrownianPath(DelayGrid grid, int noise_dim, std::uint64_t seed,
                           std::uint64_t path_index, std::int64_t origin_steps,
                           std::vector<double> increments)
    : grid_(grid),
      noise_dim_(noise_dim),
      seed_(seed),
      path_index_(path_index),
      origin_steps_(origin_steps),
      increments_(std::move(increments)) {}

BrownianPath BrownianPath::from_increments(const DelayGrid& grid, int noise_dim,
                                           std::vector<double> increments) {
    if (noise_dim < 1 ||
        increments.size() != static_cast<std::size_t>(grid.total_steps()) * noise_dim) {
        throw Error(ErrorKind::DimensionMismatch, "increment array must hold M x noise_dim values");
    }
    return BrownianPath(grid, noise_dim, 0, 0, grid.total_steps(), std::move(increments));
}

std::span<const double> BrownianPath::increment(std::int64_t l) const {
    return std::span<const double>(increments_).subspan(static_cast<std::size_t>(l) * noise_dim_,
                                                        static_cast<std::size_t>(noise_dim_));
}

std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t path_index) {
    return splitmix64(seed ^ splitmix64(path_index ^ 0x6a09e667f3bcc909ULL));
}

BrownianPath generate(const DelayGrid& grid, int noise_dim, std::uint64_t seed,
                      std::uint64_t path_index) {
    if (noise_dim < 1) {
        throw Error(ErrorKind::InvalidRange, "noise dimension must be >= 1");
    }
    const std::size_t count = static_cast<std::size_t>(grid.total_steps()) * noise_dim;
    const double scale = std::sqrt(grid.step());
    std::mt19937_64 engine(derive_stream_key(seed, path_index));

    std::vector<double> increments(count);
    for (std::size_t i = 0; i < count; i += 2) {
        const double radius = std::sqrt(-2.0 * std::log(open_unit(engine)));
        const double angle = 2.0 * std::numbers::pi * open_unit(engine);
        increments[i] = scale * radius * std::cos(angle);
        if (i + 1 < count) increments[i + 1] = scale * radius * std::sin(angle);
    }
    return BrownianPath(grid, noise_dim, seed, path_index, grid.total_steps(), std::move(increments));
}

BrownianPath coarsen(const BrownianPath& path, std::int64_t factor) {
    if (factor < 2) {
        throw Error(ErrorKind::IncompatibleFactor, "coarsening factor must be >= 2");
    }
    const DelayGrid coarse = path.grid().coarsened(factor);
    const int m = path.noise_dim();
    std::vector<double> sums(static_cast<std::size_t>(coarse.total_steps()) * m, 0.0);
    for (std::int64_t l = 0; l < coarse.total_steps(); ++l) {
        for (int c = 0; c < m; ++c) {
            double acc = 0.0;
            for (std::int64_t j = 0; j < factor; ++j) {
                acc += path.increment(l * factor + j)[c];
            }
            sums[static_cast<std::size_t>(l) * m + c] = acc;
        }
    }
    return BrownianPath(coarse, m, path.seed(), path.path_index(), path.origin_steps(),
                        std::move(sums));
}

void write_increments_binary(std::ostream& out, const BrownianPath& path) {
    for (double v : path.data()) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        unsigned char bytes[8];
        for (int b = 0; b < 8; ++b) {
            bytes[b] = static_cast<unsigned char>(bits & 0xffU);
            bits >>= 8;
        }
        out.write(reinterpret_cast<const char*>(bytes), sizeof bytes);
    }
}

}  // namespace nsdde
