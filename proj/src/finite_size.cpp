#include "mdiq/finite_size.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mdiq/randomness.hpp"

namespace mdiq {

double shannon_entropy_binary(double p) {
    if (p < -kTol || p > 1.0 + kTol)
        throw std::invalid_argument("shannon_entropy_binary: probability outside [0,1]");
    p = std::clamp(p, 0.0, 1.0);
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

namespace {

void check_counts(std::int64_t n_i, std::int64_t n0) {
    if (n_i < 1 || n0 < 1) throw std::invalid_argument("counts must be >= 1");
}

double xi_core(double base, double theta, std::int64_t n_i, std::int64_t n0) {
    if (base + theta > 1.0 + kTol)
        throw std::invalid_argument("xi: frequency plus deviation leaves [0,1]");
    const double ntot = static_cast<double>(n_i) + static_cast<double>(n0);
    const double mixed = std::min(base + static_cast<double>(n0) * theta / ntot, 1.0);
    double xi = shannon_entropy_binary(mixed) -
                (static_cast<double>(n_i) * shannon_entropy_binary(base) +
                 static_cast<double>(n0) * shannon_entropy_binary(std::min(base + theta, 1.0))) /
                    ntot;
    return std::max(xi, 0.0);
}

double replace_zero(double e_x, std::int64_t n_i) {
    return e_x <= 0.0 ? 1.0 / static_cast<double>(n_i) : e_x;
}

}  // namespace

double xi_unscaled(double theta, std::int64_t n_i, std::int64_t n0, double e_x) {
    check_counts(n_i, n0);
    if (theta < 0.0) throw std::invalid_argument("xi_unscaled: negative deviation");
    return xi_core(replace_zero(e_x, n_i), theta, n_i, n0);
}

double xi_scaled(double theta, std::int64_t n_i, std::int64_t n0, double e_x) {
    check_counts(n_i, n0);
    if (theta < 0.0) throw std::invalid_argument("xi_scaled: negative deviation");
    return xi_core(0.5 * (1.0 + e_x), theta, n_i, n0);
}

double failure_probability(BoundKind kind, double theta, std::int64_t n_i, std::int64_t n0,
                           double e_x) {
    check_counts(n_i, n0);
    const double ni = static_cast<double>(n_i);
    const double n0d = static_cast<double>(n0);
    double xi, pref;
    if (kind == BoundKind::unscaled) {
        xi = xi_unscaled(theta, n_i, n0, e_x);
        double e = replace_zero(e_x, n_i);
        if (e >= 1.0) return 1.0;  // only reachable with theta = 0
        pref = std::sqrt(ni + n0d) / std::sqrt(ni * n0d * e * (1.0 - e));
    } else {
        xi = xi_scaled(theta, n_i, n0, e_x);
        if (e_x >= 1.0) return 1.0;
        pref = 4.0 * std::sqrt(ni + n0d) / std::sqrt(ni * n0d * (1.0 + e_x) * (1.0 - e_x));
    }
    return std::min(1.0, pref * std::exp2(-(ni + n0d) * xi));
}

DeviationBound deviation_for_epsilon(const FluctuationInput& input) {
    if (input.epsilon <= 0.0 || input.epsilon >= 1.0)
        throw std::invalid_argument("deviation_for_epsilon: epsilon outside (0,1)");
    if (input.n_gen < 1) throw std::invalid_argument("deviation_for_epsilon: n_gen < 1");
    for (double f : input.observed)
        if (f < -kTol || f > 1.0 + kTol)
            throw std::invalid_argument("deviation_for_epsilon: frequency outside [0,1]");

    const double target = input.epsilon / 4.0;  // union bound over the four probes
    DeviationBound out;
    for (int i = 0; i < kNumProbes; ++i) {
        const BoundKind kind = bound_kind_for_probe(i);
        const std::int64_t n_i = input.n_test[i];
        check_counts(n_i, input.n_gen);
        const double e = std::clamp(input.observed[i], 0.0, 1.0);
        double theta_max;
        if (kind == BoundKind::unscaled)
            theta_max = 1.0 - replace_zero(e, n_i);
        else
            theta_max = 0.5 * (1.0 - e);
        theta_max = std::max(theta_max, 0.0);

        auto fp = [&](double th) { return failure_probability(kind, th, n_i, input.n_gen, e); };
        if (fp(theta_max) > target) {
            out.theta[i] = theta_max;
            out.epsilon_achieved[i] = fp(theta_max);
            out.reached_target = false;
            continue;
        }
        double lo = 0.0, hi = theta_max;
        while (hi - lo > 1e-10) {
            double mid = 0.5 * (lo + hi);
            if (fp(mid) <= target)
                hi = mid;
            else
                lo = mid;
        }
        out.theta[i] = hi;
        out.epsilon_achieved[i] = fp(hi);
    }
    return out;
}

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
    lo = std::clamp(lo, 0.0, 1.0);
    hi = std::clamp(hi, 0.0, 1.0);
    if (hi - lo < 1e-15 || count < 2) return {lo};
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
    return v;
}

}  // namespace

PovmPair worst_case_pair(const TomographyResult& result, const DeviationBound& bound, int grid) {
    const std::array<double, 4> freq = predicted_frequencies(result.pair);
    std::array<double, 4> lo{}, hi{};
    for (int i = 0; i < 4; ++i) {
        lo[i] = std::max(0.0, freq[i] - bound.theta[i]);
        hi[i] = std::min(1.0, freq[i] + bound.theta[i]);
    }

    const BlochState input = BlochState::plus();
    double best = 2.0;
    std::array<double, 4> best_f = freq;

    auto scan = [&](const std::array<double, 4>& clo, const std::array<double, 4>& chi) {
        // Probe |+> (index 2) only moves n_x, which is invisible to a |+>
        // input; pin it to the box value nearest a1 to ease positivity.
        auto f0s = linspace(clo[0], chi[0], grid);
        auto f1s = linspace(clo[1], chi[1], grid);
        auto f3s = linspace(clo[3], chi[3], grid);
        for (double f0 : f0s)
            for (double f1 : f1s) {
                const double a1 = 0.5 * (f0 + f1);
                const double f2 = std::clamp(a1, lo[2], hi[2]);
                for (double f3 : f3s) {
                    TomographyResult t = solve_tomography({f0, f1, f2, f3});
                    double r = certified_randomness(t.pair, input).bits_per_run;
                    if (r < best) {
                        best = r;
                        best_f = {f0, f1, f2, f3};
                    }
                }
            }
    };

    scan(lo, hi);
    // One refinement pass around the incumbent.
    std::array<double, 4> rlo{}, rhi{};
    for (int i = 0; i < 4; ++i) {
        double step = (hi[i] - lo[i]) / std::max(grid - 1, 1);
        rlo[i] = std::max(lo[i], best_f[i] - step);
        rhi[i] = std::min(hi[i], best_f[i] + step);
    }
    scan(rlo, rhi);

    return solve_tomography(best_f).pair;
}

double subset_selection_seed_bits(std::int64_t n_runs, double test_fraction) {
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
        throw std::invalid_argument("subset_selection_seed_bits: fraction outside (0,1)");
    return static_cast<double>(n_runs) * shannon_entropy_binary(test_fraction);
}

}  // namespace mdiq
