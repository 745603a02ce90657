#include "wedge/oracle.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace wedge {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

// Crossing probabilities below e^-50 are not worth an exp.
constexpr double kSkipExponent = 50.0;

std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

// Open (0, 1).
double unit32(std::uint32_t x) { return (static_cast<double>(x) + 0.5) * 0x1p-32; }

// Gaps to the two walls as affine functions of time.
struct Walls {
    double lo0, lo_slope;  // lower wall: lo0 - lo_slope t
    double hi0, hi_slope;  // upper wall: hi0 + hi_slope t
    double x0;
};

double crossing_exponent(double g0, double g1, double h) { return 2.0 * g0 * g1 / h; }

// One path; true if it survives to the end. Bridge draws are taken from the
// path's stream only when a crossing probability is worth drawing against.
bool survives(const Walls& w, int steps, double h, PhiloxEngine rng) {
    boost::random::normal_distribution<double> normal(0.0, std::sqrt(h));
    double x = w.x0;
    double lower_gap = x + w.lo0;
    double upper_gap = w.hi0 - x;
    for (int i = 1; i <= steps; ++i) {
        const double t = i * h;
        x += normal(rng);
        const double lg = x + w.lo0 + w.lo_slope * t;
        const double ug = w.hi0 + w.hi_slope * t - x;
        if (!(lg > 0.0) || !(ug > 0.0)) {
            return false;
        }
        const double el = crossing_exponent(lower_gap, lg, h);
        if (el < kSkipExponent && unit32(rng()) < std::exp(-el)) {
            return false;
        }
        const double eu = crossing_exponent(upper_gap, ug, h);
        if (eu < kSkipExponent && unit32(rng()) < std::exp(-eu)) {
            return false;
        }
        lower_gap = lg;
        upper_gap = ug;
    }
    return true;
}

void check_config(const McConfig& cfg, double T) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw DomainError("mc: T must be positive and finite");
    }
    if (cfg.paths < 1000) {
        throw DomainError("mc: paths must be >= 1000");
    }
    if (!(cfg.dt > 0.0) || !(cfg.dt <= T / 10.0)) {
        throw DomainError("mc: dt must lie in (0, T/10]");
    }
    if (cfg.chunk < 1) {
        throw DomainError("mc: chunk must be >= 1");
    }
    if (std::ceil(T / cfg.dt) > 1e9) {
        throw DomainError("mc: too many steps");
    }
}

McEstimate run(const Walls& w, double T, const McConfig& cfg) {
    check_config(cfg, T);
    const int steps = static_cast<int>(std::ceil(T / cfg.dt));
    const double h = T / steps;
    const std::int64_t chunks = (cfg.paths + cfg.chunk - 1) / cfg.chunk;
    std::vector<std::int64_t> alive(chunks, 0);
    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (std::int64_t c = next++; c < chunks; c = next++) {
            const std::int64_t begin = c * cfg.chunk;
            const std::int64_t end = std::min(cfg.paths, begin + cfg.chunk);
            std::int64_t count = 0;
            for (std::int64_t i = begin; i < end; ++i) {
                count += survives(w, steps, h, mc_seeded_stream(cfg.seed, i)) ? 1 : 0;
            }
            alive[c] = count;
        }
    };
    unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                        : cfg.threads;
    threads = static_cast<unsigned>(std::min<std::int64_t>(threads, chunks));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
    }
    std::int64_t total = 0;
    for (std::int64_t a : alive) {
        total += a;
    }
    McEstimate est;
    est.paths_used = cfg.paths;
    est.p_hat = static_cast<double>(total) / static_cast<double>(cfg.paths);
    est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(cfg.paths));
    return est;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kW0;
            k[1] += kW1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        c = {hi32(p1) ^ c[1] ^ k[0], lo32(p1), hi32(p0) ^ c[3] ^ k[1], lo32(p0)};
    }
    return c;
}

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{lo32(seed), hi32(seed)}, lo_(lo32(stream)), hi_(hi32(stream)) {}

std::array<std::uint32_t, 4> PhiloxStream::block(std::uint64_t index) const noexcept {
    return philox4x32({lo_, hi_, lo32(index), hi32(index)}, key_);
}

PhiloxEngine mc_seeded_stream(std::uint64_t seed, std::uint64_t path_index) noexcept {
    return {seed, path_index};
}

McConfig McConfig::defaults(double T) {
    McConfig cfg;
    cfg.dt = std::min(1e-3, T / 1000.0);
    return cfg;
}

McEstimate mc_wedge_survival(const WedgeProblem& problem, double T, const McConfig& cfg) {
    return run({problem.b1(), problem.a1(), problem.b2(), problem.a2(), 0.0}, T, cfg);
}

McEstimate mc_strip_survival(const StripProblem& sp, double T, const McConfig& cfg) {
    return run({sp.a1(), 0.0, sp.a2(), 0.0, sp.x0()}, T, cfg);
}

}  // namespace wedge
