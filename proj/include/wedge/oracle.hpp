#pragma once

#include "wedge/core.hpp"
#include "wedge/strip.hpp"

#include <array>
#include <cstdint>

namespace wedge {

/// Philox4x32-10 block function.
[[nodiscard]] std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                                      std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based stream: block i of stream s under seed k is
/// philox4x32({s_lo, s_hi, i_lo, i_hi}, {k_lo, k_hi}). Streams never overlap
/// and any block can be drawn without generating the earlier ones.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream) noexcept;

    [[nodiscard]] std::array<std::uint32_t, 4> block(std::uint64_t index) const noexcept;

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t lo_;
    std::uint32_t hi_;
};

/// A PhiloxStream read block after block, as a uniform random bit generator.
class PhiloxEngine {
public:
    using result_type = std::uint32_t;

    PhiloxEngine(std::uint64_t seed, std::uint64_t stream) noexcept : stream_(seed, stream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return 0xFFFFFFFFu; }

    result_type operator()() noexcept {
        if (used_ == 4) {
            buffer_ = stream_.block(next_++);
            used_ = 0;
        }
        return buffer_[used_++];
    }

private:
    PhiloxStream stream_;
    std::uint64_t next_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
};

/// The Monte Carlo estimators give every path its own stream, so the
/// estimate does not depend on how paths are split into chunks or threads.
[[nodiscard]] PhiloxEngine mc_seeded_stream(std::uint64_t seed, std::uint64_t path_index) noexcept;

struct McConfig {
    std::int64_t paths = 1000000;  ///< >= 1000
    double dt = 1e-3;              ///< <= T / 10; the step used is T / ceil(T / dt)
    std::uint64_t seed = 1;
    std::int64_t chunk = 4096;  ///< paths per work item
    unsigned threads = 1;       ///< 0 = hardware concurrency

    /// paths = 1e6, dt = min(1e-3, T / 1000).
    [[nodiscard]] static McConfig defaults(double T);
};

struct McEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;  ///< sqrt(p_hat (1 - p_hat) / paths)
    std::int64_t paths_used = 0;
};

/// Fraction of simulated paths that stay inside the wedge up to T. Each step
/// draws a Gaussian increment and then kills the path with the Brownian
/// bridge probability exp(-2 g0 g1 / dt) of having touched each line in
/// between (g0, g1 the gaps to that line at the step ends), one independent
/// draw per line.
[[nodiscard]] McEstimate mc_wedge_survival(const WedgeProblem& problem, double T,
                                           const McConfig& cfg);

/// The same for the strip [-a1, a2] started at x0.
[[nodiscard]] McEstimate mc_strip_survival(const StripProblem& sp, double T, const McConfig& cfg);

}  // namespace wedge
