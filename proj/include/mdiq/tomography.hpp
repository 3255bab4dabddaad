#pragma once

#include <array>
#include <cstdint>

#include "mdiq/povm.hpp"

namespace mdiq {

// Probe order used throughout: |0>, |1>, |+>, |+i>.
inline constexpr int kNumProbes = 4;

inline const std::array<BlochState, kNumProbes>& probe_states() {
    static const std::array<BlochState, kNumProbes> probes = {
        BlochState::zero(), BlochState::one(), BlochState::plus(), BlochState::plus_i()};
    return probes;
}

struct ProbeCount {
    std::int64_t trials = 0;
    std::int64_t zeros = 0;
};

struct TomographyCounts {
    std::array<ProbeCount, kNumProbes> probes;

    bool valid() const {
        for (const auto& p : probes)
            if (p.trials < 0 || p.zeros < 0 || p.zeros > p.trials) return false;
        return true;
    }
    std::array<double, kNumProbes> frequencies() const;
};

struct TomographyResult {
    PovmPair pair;
    std::array<double, 4> raw{};  // (a1, a1 nx, a1 ny, a1 nz) before projection
    bool projected = false;
};

/// Output-0 probabilities for the four probes given a POVM pair.
std::array<double, kNumProbes> predicted_frequencies(const PovmPair& pair);

/// Inverts the linear probe system; projects to the physical set when the raw
/// solution violates positivity.
TomographyResult solve_tomography(const std::array<double, kNumProbes>& freqs);

/// Nearest valid pair to raw = (a1, a1 nx, a1 ny, a1 nz) in Euclidean distance.
PovmPair project_to_physical(const std::array<double, 4>& raw);

}  // namespace mdiq
