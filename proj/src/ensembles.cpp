#include "fkrylov/ensembles.hpp"

#include <cmath>

#include "fkrylov/chain.hpp"
#include "fkrylov/parallel.hpp"
#include "fkrylov/spectral.hpp"

namespace fkrylov {

double EnsembleSpec::gamma(int n) const {
    double dn = static_cast<double>(d - n);
    double g = 0.0;
    switch (kind) {
        case Kind::Degenerate: g = std::pow(dn, 1.0 + epsilon) - 2.0; break;
        case Kind::Chaotic: g = beta * dn / 2.0 - 1.0; break;
        case Kind::Integrable: g = std::pow(dn, 1.0 - epsilon) - 2.0; break;
    }
    // Keep the density normalizable near the chain end; affects O(1) sites.
    if (g <= -1.0) g = -0.5;
    return g;
}

std::string EnsembleSpec::kind_name() const {
    switch (kind) {
        case Kind::Degenerate: return "degenerate";
        case Kind::Chaotic: return "chaotic";
        case Kind::Integrable: return "integrable";
    }
    return "?";
}

EnsembleSpec::Kind EnsembleSpec::parse_kind(const std::string& name) {
    if (name == "degenerate" || name == "i") return Kind::Degenerate;
    if (name == "chaotic" || name == "ii") return Kind::Chaotic;
    if (name == "integrable" || name == "iii") return Kind::Integrable;
    throw std::invalid_argument("unknown ensemble kind: " + name);
}

VerblunskySequence sample_verblunsky(const EnsembleSpec& spec, Rng& rng) {
    if (spec.d < 2) throw std::invalid_argument("sample_verblunsky: d >= 2 required");
    std::vector<cx> alphas(spec.d);
    for (int n = 0; n < spec.d - 1; ++n) {
        // |alpha|^2 ~ Beta(1, gamma+1): s = 1 - u^{1/(gamma+1)}
        double g = spec.gamma(n);
        double s = 1.0 - std::pow(rng.uniform_pos(), 1.0 / (g + 1.0));
        double phase = 2.0 * M_PI * rng.uniform();
        alphas[n] = std::sqrt(s) * cx(std::cos(phase), std::sin(phase));
    }
    double phase = 2.0 * M_PI * rng.uniform();
    alphas[spec.d - 1] = cx(std::cos(phase), std::sin(phase)); // unimodular cap
    return VerblunskySequence::from_alphas(std::move(alphas));
}

VerblunskySequence sample_verblunsky(const EnsembleSpec& spec) {
    Rng rng(spec.seed);
    return sample_verblunsky(spec, rng);
}

std::vector<double> ensemble_mean_rho_sq(const EnsembleSpec& spec) {
    std::vector<double> out(spec.d - 1);
    for (int n = 0; n < spec.d - 1; ++n) {
        double g = spec.gamma(n);
        out[n] = (g + 1.0) / (g + 2.0);
    }
    return out;
}

SpectralStats spectral_stats_from_phases(std::vector<double> phases) {
    SpectralStats stats;
    stats.eigenphases = std::move(phases);
    const std::size_t n = stats.eigenphases.size();
    if (n < 3) return stats;

    std::vector<double> spacings;
    spacings.reserve(n);
    for (std::size_t i = 0; i + 1 < n; ++i) spacings.push_back(stats.eigenphases[i + 1] - stats.eigenphases[i]);
    spacings.push_back(2.0 * M_PI - (stats.eigenphases[n - 1] - stats.eigenphases[0])); // wraparound

    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s0 = spacings[i];
        double s1 = spacings[(i + 1) % n];
        if (s0 < 1e-12 || s1 < 1e-12) {
            ++stats.degenerate_excluded;
            continue;
        }
        double r = std::min(s0, s1) / std::max(s0, s1);
        stats.spacing_ratios.push_back(r);
        acc += r;
    }
    if (!stats.spacing_ratios.empty()) stats.mean_r = acc / static_cast<double>(stats.spacing_ratios.size());
    return stats;
}

SpectralStats eigenphases(const CMVForm& form) {
    // The Hessenberg form has the same spectrum (same operator, the Szego
    // basis of the same subspace) and zhseqr skips the reduction step.
    Matrix h = hessenberg_matrix(form.coeffs);
    return spectral_stats_from_phases(sorted_phases(hessenberg_eigenvalues(h)));
}

double mean_spacing_ratio(const SpectralStats& stats) {
    if (stats.eigenphases.size() < 3) throw std::invalid_argument("mean_spacing_ratio: need >= 3 eigenphases");
    return stats.mean_r;
}

Matrix haar_unitary(Index d, Rng& rng) {
    Matrix z(d, d);
    for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < d; ++i) z(i, j) = rng.normal_cx();
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < d; ++j) {
        cx rd = r(j, j);
        q.col(j) *= rd / std::abs(rd);
    }
    return q;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double nn = static_cast<double>(n);
    return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

LocalizationScan localization_scan(const EnsembleSpec& family, const std::vector<int>& sizes,
                                   const LocalizationScanOptions& opts) {
    LocalizationScan scan;
    for (int d : sizes) {
        std::vector<double> es_per_real(opts.realizations), k_per_real(opts.realizations);
        parallel_for(opts.realizations, opts.threads, [&](int r) {
            EnsembleSpec spec = family;
            spec.d = d;
            Rng rng(Rng::derive(family.seed, (static_cast<std::uint64_t>(d) << 20) + r));
            CMVForm form = cmv_factorization(sample_verblunsky(spec, rng));
            int steps = opts.steps_per_site * d;
            double es_acc = 0.0, k_acc = 0.0;
            int npos = std::min(opts.initial_positions, d);
            for (int p = 0; p < npos; ++p) {
                int site = npos == 1 ? 0 : static_cast<int>(static_cast<double>(p) * (d - 1) / (npos - 1));
                auto series = propagate_cmv_delta(form, site, steps);
                auto obs = observables(series);
                es_acc += second_half_mean(obs.expS);
                // K measured relative to the start site; |.| so both
                // directions of spread count.
                std::vector<double> krel(obs.K.size());
                for (std::size_t t = 0; t < obs.K.size(); ++t) krel[t] = std::abs(obs.K[t] - site);
                k_acc += second_half_mean(krel);
            }
            es_per_real[r] = es_acc / npos;
            k_per_real[r] = k_acc / npos;
        });
        LocalizationPoint pt;
        pt.d = d;
        pt.realizations = opts.realizations;
        double acc = 0.0, acc2 = 0.0, kacc = 0.0;
        for (int r = 0; r < opts.realizations; ++r) {
            acc += es_per_real[r];
            acc2 += es_per_real[r] * es_per_real[r];
            kacc += k_per_real[r];
        }
        pt.mean_expS = acc / opts.realizations;
        pt.mean_K = kacc / opts.realizations;
        if (opts.realizations > 1) {
            double var = (acc2 - acc * acc / opts.realizations) / (opts.realizations - 1);
            pt.stderr_expS = std::sqrt(std::max(0.0, var) / opts.realizations);
        }
        scan.points.push_back(pt);
    }
    std::vector<double> xs, ys;
    for (const auto& p : scan.points) {
        xs.push_back(p.d);
        ys.push_back(p.mean_expS);
    }
    if (xs.size() >= 2) scan.fitted_slope = loglog_slope(xs, ys);
    return scan;
}

} // namespace fkrylov
