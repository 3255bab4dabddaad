#pragma once

#include <array>
#include <cstdint>

#include "mdiq/tomography.hpp"

namespace mdiq {

struct FluctuationInput {
    std::array<std::int64_t, kNumProbes> n_test{};  // test runs per probe
    std::int64_t n_gen = 0;                         // generation runs
    std::array<double, kNumProbes> observed{};      // output-0 frequencies per probe
    double epsilon = 0.0;                           // total failure probability target
};

struct DeviationBound {
    std::array<double, kNumProbes> theta{};
    std::array<double, kNumProbes> epsilon_achieved{};
    bool reached_target = true;  // false when some probe hit its domain edge
};

enum class BoundKind { unscaled, scaled };

/// Which tail-bound variant applies to each probe. The |1> probe has its
/// generation-run counterpart confined to [0,1]; the other probes need the
/// [-1,1] -> [0,1] rescaling.
inline BoundKind bound_kind_for_probe(int probe) {
    return probe == 1 ? BoundKind::unscaled : BoundKind::scaled;
}

/// Binary Shannon entropy in bits, with the endpoint limits H(0)=H(1)=0.
double shannon_entropy_binary(double p);

/// Concavity-gap exponent for the direct (unscaled) random-sampling bound.
/// A zero observed frequency is replaced by 1/n_i.
double xi_unscaled(double theta, std::int64_t n_i, std::int64_t n0, double e_x);

/// Same exponent after mapping frequencies through y -> (1+y)/2.
double xi_scaled(double theta, std::int64_t n_i, std::int64_t n0, double e_x);

/// Tail probability bound: min(1, prefactor * 2^{-(n_i+n0) xi(theta)}).
double failure_probability(BoundKind kind, double theta, std::int64_t n_i, std::int64_t n0,
                           double e_x);

/// Smallest per-probe deviation theta whose failure bound is <= epsilon/4
/// (union bound over the four probes), found by bisection.
DeviationBound deviation_for_epsilon(const FluctuationInput& input);

/// Minimizes the certified randomness for input |+> over the box of
/// frequencies within theta of the observed values; returns the minimizer.
PovmPair worst_case_pair(const TomographyResult& result, const DeviationBound& bound,
                         int grid = 64);

/// Seed bits consumed for run-type selection, n * h(test_fraction) amortized.
double subset_selection_seed_bits(std::int64_t n_runs, double test_fraction);

}  // namespace mdiq
