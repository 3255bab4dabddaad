#pragma once

#include <span>
#include <vector>

#include "mdiq/povm.hpp"

namespace mdiq {

struct RandomnessValue {
    double bits_per_run = 0.0;
    bool labeling_swapped = false;
};

struct OracleConfig {
    int grid_resolution = 64;  // angular subdivisions of the Bloch sphere
    int max_branches = 4;
};

/// Hmin(p) = -log2 max(p, 1-p). Throws outside [0,1].
double min_entropy_binary(double p);

/// Closed-form certified randomness of a POVM pair for a pure input state.
/// The pair is canonicalized first; the result carries the swapped flag.
RandomnessValue certified_randomness(const PovmPair& pair, const BlochState& input);

struct OracleBranch {
    Vec3 direction;
    double weight = 0.0;
};

struct OracleResult {
    double bits = 0.0;
    bool feasible = false;
    double residual = 0.0;  // reconstruction residual of the best attempt
    std::vector<OracleBranch> witness;
};

/// Independent brute-force minimization over projector-mixture decompositions
/// whose branch directions lie on a discretized sphere. Lower-bounds the
/// optimal decomposition up to discretization error.
OracleResult brute_force_randomness(const PovmPair& pair, const BlochState& input,
                                    const OracleConfig& cfg);

/// Component-wise convex combination of POVM pairs. Weights must sum to 1.
PovmPair average_povm(std::span<const PovmPair> pairs, std::span<const double> weights);

}  // namespace mdiq
