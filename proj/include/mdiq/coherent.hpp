#pragma once

#include <array>
#include <span>
#include <vector>

#include "mdiq/povm.hpp"

namespace mdiq {

/// Phase-randomized weak laser source feeding the measurement device.
struct SourceModel {
    double mu = 0.0;        // mean photon number
    double eta = 1.0;       // total transmittance
    double rep_rate = 1e8;  // pulses per second
};

struct PhotonFractions {
    double vacuum = 1.0;
    double single = 0.0;
    double multi = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool empty(double tol = kTol) const { return lo > hi + tol; }
    double width() const { return hi - lo; }
    double clamp(double x) const { return std::min(std::max(x, lo), hi); }
};

/// Intervals for (a1, a1 nx, a1 ny, a1 nz) consistent with coherent-source
/// observations once the multi-photon slack is accounted for.
struct FeasibleBox {
    Interval a1, v_x, v_y, v_z;  // v = a1 * n
    bool empty = false;
};

struct RateOptions {
    bool use_shannon = false;  // evaluate with H instead of Hmin
    int grid = 64;             // per-axis resolution of the box minimization
};

struct RateFragment {
    double bits_per_pulse = 0.0;
    PovmPair worst_pair;
    bool empty_box = false;
};

struct RateReport {
    double mu_star = 0.0;
    double bits_per_pulse = 0.0;
    double bits_per_second = 0.0;
    FeasibleBox box;
    PovmPair worst_pair;
};

struct SweepRow {
    double eta = 0.0;
    double eta_db = 0.0;
    double mu_star = 0.0;
    double bits_per_pulse = 0.0;
    double bits_per_second = 0.0;
};

/// Poisson head probabilities (vacuum, single, multi) for mean photon number mu.
PhotonFractions photon_fractions(double mu);

// Coherent-probe order: unpolarized, +x, +y, +z (distinct from the pure-probe
// order used by tomography).
inline constexpr int kNumCoherentProbes = 4;

/// Honest lossy-detector prediction: closed intervals for the output-0
/// probability of the four coherent probes, no-click mapped to output 1.
std::array<Interval, kNumCoherentProbes> honest_model_probabilities(const SourceModel& model);

/// Parameter box consistent with the observed output-0 probabilities after
/// allotting the multi-photon component its worst-case slack.
FeasibleBox feasible_box(const std::array<double, kNumCoherentProbes>& observed, double mu);

/// Minimal vacuum+single randomness over the box, weighted by (1+mu)e^{-mu}.
RateFragment worst_case_rate(const FeasibleBox& box, double mu, const RateOptions& opt = {});

/// Scans the mu grid, taking the adversarially worst observation inside the
/// honest-model intervals at each mu, and returns the best intensity.
RateReport optimize_intensity(double eta, std::span<const double> mu_grid, double rep_rate = 1e8,
                              const RateOptions& opt = {});

/// One optimized row per transmittance value.
std::vector<SweepRow> rate_sweep(std::span<const double> eta_values, double rep_rate = 1e8,
                                 const RateOptions& opt = {});

/// Default log-spaced intensity grid for optimization.
std::vector<double> default_mu_grid(int points = 160, double mu_min = 1e-6, double mu_max = 0.5);

}  // namespace mdiq
