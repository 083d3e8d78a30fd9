#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fkrylov/krylov.hpp"
#include "fkrylov/rng.hpp"
#include "fkrylov/types.hpp"
#include "fkrylov/verblunsky.hpp"

namespace fkrylov {

// Random Verblunsky ensembles: alpha_n drawn independently on the unit disk
// with density ~ (1 - |alpha|^2)^{gamma_n}, uniform phase, and
//   degenerate:  gamma_n = (d-n)^{1+eps} - 2     (clock statistics)
//   chaotic:     gamma_n = beta (d-n)/2 - 1      (circular beta ensemble)
//   integrable:  gamma_n = (d-n)^{1-eps} - 2     (Poisson statistics)
// for n = 0..d-2; alpha_{d-1} is unimodular with uniform phase. |alpha_n|^2
// is Beta(1, gamma_n + 1), so <|alpha_n|^2> = 1/(gamma_n + 2).
struct EnsembleSpec {
    enum class Kind { Degenerate, Chaotic, Integrable };

    Kind kind = Kind::Chaotic;
    int d = 2;
    double epsilon = 0.5; // Degenerate / Integrable
    double beta = 2.0;    // Chaotic
    std::uint64_t seed = 0;

    double gamma(int n) const;
    std::string kind_name() const;

    static Kind parse_kind(const std::string& name);
};

VerblunskySequence sample_verblunsky(const EnsembleSpec& spec);
VerblunskySequence sample_verblunsky(const EnsembleSpec& spec, Rng& rng);

// Closed-form <rho_n^2> = (gamma_n+1)/(gamma_n+2) for n = 0..d-2.
std::vector<double> ensemble_mean_rho_sq(const EnsembleSpec& spec);

struct SpectralStats {
    std::vector<double> eigenphases;    // sorted, [0, 2pi)
    std::vector<double> spacing_ratios; // r_i over cyclic spacings
    double mean_r = 0.0;
    int degenerate_excluded = 0; // spacings below 1e-12 dropped from the ratios
};

// Dense unitary eigendecomposition of the CMV matrix; phases sorted,
// wraparound spacing included (the spectrum is a circle).
SpectralStats eigenphases(const CMVForm& form);
SpectralStats spectral_stats_from_phases(std::vector<double> phases);

// r_i = min(s_i, s_{i+1}) / max(s_i, s_{i+1}) over cyclic spacings.
double mean_spacing_ratio(const SpectralStats& stats);

// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
Matrix haar_unitary(Index d, Rng& rng);

struct LocalizationPoint {
    int d = 0;
    double mean_expS = 0.0;
    double mean_K = 0.0;
    double stderr_expS = 0.0;
    int realizations = 0;
};

struct LocalizationScan {
    std::vector<LocalizationPoint> points;
    double fitted_slope = 0.0; // log mean_expS vs log d
};

struct LocalizationScanOptions {
    int realizations = 4;
    int initial_positions = 10; // evenly spaced start sites
    int steps_per_site = 10;    // run length = steps_per_site * d
    int threads = 0;            // 0 = hardware concurrency
};

// For each size d: sample chains, propagate initially localized packets from
// several start sites, time-average e^S and K over the second half of a
// 10 d step run, average over realizations; then fit log(e^S) vs log(d).
LocalizationScan localization_scan(const EnsembleSpec& family, const std::vector<int>& sizes,
                                   const LocalizationScanOptions& opts = {});

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace fkrylov
