#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdiq/bitstream.hpp"
#include "mdiq/coherent.hpp"
#include "mdiq/finite_size.hpp"
#include "mdiq/tomography.hpp"

namespace mdiq {

/// Per-run counter-based generator so that disjoint run ranges can be
/// simulated on different shards with identical results.
class RunRng {
  public:
    RunRng(std::uint64_t master_seed, std::uint64_t run_index);
    std::uint64_t next_u64();
    double uniform();  // [0, 1)
    int bernoulli(double p) { return uniform() < p ? 1 : 0; }

  private:
    std::uint64_t state_;
};

struct ProtocolConfig {
    std::int64_t n_runs = 0;
    double test_fraction = 0.1;
    std::array<double, kNumProbes> probe_distribution{0.25, 0.25, 0.25, 0.25};
    double epsilon = 0x1p-100;
    std::optional<SourceModel> source;  // absent: ideal single-photon source
    int no_click_maps_to = 0;
};

struct DeviceModel {
    enum class Kind { honest_lossy, fixed_povm, postselection_attacker };
    Kind kind = Kind::honest_lossy;
    double eta = 1.0;                            // honest_lossy
    std::vector<PovmPair> schedule;              // fixed_povm: cycled per run
    std::vector<std::uint8_t> predetermined;     // postselection_attacker

    static DeviceModel honest(double eta);
    static DeviceModel fixed(const PovmPair& pair);
    static DeviceModel fixed_schedule(std::vector<PovmPair> pairs);
    static DeviceModel attacker(std::vector<std::uint8_t> bits);
    static DeviceModel attacker_from_seed(std::int64_t n, std::uint64_t seed);
};

struct SeedAccounting {
    double subset_selection_bits = 0.0;
    double probe_choice_bits = 0.0;
    double total() const { return subset_selection_bits + probe_choice_bits; }
};

struct ProtocolResult {
    TomographyCounts counts;
    BitVec generation_bits;
    std::int64_t generation_runs = 0;
    TomographyResult tomo;
    DeviationBound deviation;
    double certified_bits_per_run = 0.0;
    std::int64_t extractable_length = 0;
    SeedAccounting seed;
    bool aborted = false;
    std::string diagnostic;
};

/// One outcome bit for the given probe. The run index addresses the
/// attacker's predetermined string and the fixed-POVM schedule.
int device_response(const DeviceModel& device, const BlochState& probe, RunRng& rng,
                    std::int64_t run_index, int no_click_maps_to);

/// Worst-case certified bits per generation run given observed probe
/// frequencies and their deviation bounds. With a source model present the
/// photon-number pipeline is used, otherwise the single-photon closed form on
/// the worst pair inside the deviation box.
double certified_rate_from_statistics(const std::array<double, kNumProbes>& freqs,
                                      const DeviationBound& deviation,
                                      const std::optional<SourceModel>& source, int grid = 48);

/// Full protocol: run partitioning, probing, counting, tomography, finite-size
/// deviation bounds, and the certified extractable length.
ProtocolResult run_protocol(const ProtocolConfig& config, const DeviceModel& device,
                            std::uint64_t seed);

/// Plug-in min-entropy of the empirical 0/1 distribution.
double empirical_min_entropy(const BitVec& bits);

struct AttackDemo {
    double one_frequency = 0.0;
    TomographyResult tomo;
    double certified_rate = 0.0;       // finite-size certified bits per run
    double empirical_bits = 0.0;
    std::int64_t generation_runs = 0;
};

/// Predetermined-string post-selection attack scenario, reported side by side.
AttackDemo run_attack_demo(std::int64_t n_runs, std::uint64_t seed, double test_fraction = 0.2);

}  // namespace mdiq
