#pragma once

#include <cmath>
#include <cstdint>

#include "fkrylov/types.hpp"

namespace fkrylov {

// Deterministic generator: splitmix64 stream, with uniform/normal variates
// produced by fixed arithmetic so that identical seeds give bit-identical
// output on every platform (std::uniform_real_distribution does not
// guarantee that). Realization k of a run draws from derive(master, k).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log argument.
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform_pos();
        double v = uniform();
        double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

    cx normal_cx() { return cx(normal(), normal()); }

    Vector normal_vector(Index d) {
        Vector v(d);
        for (Index i = 0; i < d; ++i) v(i) = normal_cx();
        return v;
    }

    // Independent stream for realization `k` of a run seeded with `master`.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t k) {
        Rng mix(master ^ (0x632be59bd9b4e019ULL * (k + 1)));
        return mix.next_u64();
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace fkrylov
