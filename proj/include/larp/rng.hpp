#pragma once

#include <cmath>
#include <cstdint>

namespace larp {

/// Base seed for an experiment; all per-cell streams derive from it.
struct Seed {
    std::uint64_t base = 0;

    friend bool operator==(const Seed&, const Seed&) = default;
};

/// 64-bit finalizer with full avalanche (SplitMix64 / MurmurHash3 mixer).
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

/// Counter-based derivation of a per-cell seed. Deterministic; distinct
/// (replication, grid_index) pairs land on distinct streams for all
/// practical purposes (each word is absorbed through a full avalanche).
inline Seed derive_seed(Seed base, std::uint64_t replication, std::uint64_t grid_index) {
    std::uint64_t h = base.base;
    h = mix64(h ^ (0x9E3779B97F4A7C15ull + replication));
    h = mix64(h ^ (0xC2B2AE3D27D4EB4Full + grid_index));
    return Seed{h};
}

/// SplitMix64 generator with uniform-(0,1) and Gaussian output.
///
/// The Gaussian path is a plain Box-Muller transform on our own uniforms,
/// so the produced stream depends only on the seed, never on the standard
/// library's (implementation-defined) std::normal_distribution.
class SplitMix64 {
public:
    explicit SplitMix64(Seed seed) : state_(seed.base) {}
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    /// Uniform on the open interval (0,1); never returns an exact 0 or 1,
    /// so it is always safe under log().
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal deviate (Box-Muller, pair cached).
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace larp
