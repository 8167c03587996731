#pragma once

#include <cstdint>

namespace demifield {

// Identity of the per-replicate generator, echoed into every report.
inline constexpr const char* kRngId = "splitmix64-polar";

// Derive an independent per-replicate seed from a master seed. This is the
// SplitMix64 finalizer applied to master + (replicate+1) * golden-gamma, so
// consecutive replicates land on well-separated streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate);

// Counter-style SplitMix64 stream.
struct SplitMix64 {
    std::uint64_t state = 0;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
};

// Per-replicate random stream: uniforms from SplitMix64, normals via the
// Box-Muller polar method (the spare deviate is cached, so draw order is
// deterministic within a stream).
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    // uniform on [0, 1), 53-bit resolution
    double uniform();
    // standard normal
    double normal();

  private:
    SplitMix64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace demifield
