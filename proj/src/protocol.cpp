#include "mdiq/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mdiq/randomness.hpp"

namespace mdiq {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

RunRng::RunRng(std::uint64_t master_seed, std::uint64_t run_index) {
    state_ = master_seed ^ (run_index * 0xD1B54A32D192ED03ull + 0x8BB84B93962EACC9ull);
    // Decorrelate nearby run indices.
    splitmix64(state_);
    splitmix64(state_);
}

std::uint64_t RunRng::next_u64() { return splitmix64(state_); }

double RunRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

DeviceModel DeviceModel::honest(double eta) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("DeviceModel: eta outside [0,1]");
    DeviceModel d;
    d.kind = Kind::honest_lossy;
    d.eta = eta;
    return d;
}

DeviceModel DeviceModel::fixed(const PovmPair& pair) { return fixed_schedule({pair}); }

DeviceModel DeviceModel::fixed_schedule(std::vector<PovmPair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("DeviceModel: empty POVM schedule");
    for (const auto& p : pairs)
        if (!is_valid_povm(p)) throw std::invalid_argument("DeviceModel: invalid POVM in schedule");
    DeviceModel d;
    d.kind = Kind::fixed_povm;
    d.schedule = std::move(pairs);
    return d;
}

DeviceModel DeviceModel::attacker(std::vector<std::uint8_t> bits) {
    DeviceModel d;
    d.kind = Kind::postselection_attacker;
    d.predetermined = std::move(bits);
    return d;
}

DeviceModel DeviceModel::attacker_from_seed(std::int64_t n, std::uint64_t seed) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        RunRng rng(seed, static_cast<std::uint64_t>(i));
        bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    }
    return attacker(std::move(bits));
}

int device_response(const DeviceModel& device, const BlochState& probe, RunRng& rng,
                    std::int64_t run_index, int no_click_maps_to) {
    if (!probe.pure()) throw std::invalid_argument("device_response: probe must be pure");
    const double p_zero_ideal = 0.5 * (1.0 + probe.r[2]);  // faithful Z outcome 0
    switch (device.kind) {
        case DeviceModel::Kind::honest_lossy: {
            if (rng.bernoulli(device.eta)) return rng.bernoulli(p_zero_ideal) ? 0 : 1;
            return no_click_maps_to;
        }
        case DeviceModel::Kind::fixed_povm: {
            const PovmPair& pair =
                device.schedule[static_cast<std::size_t>(run_index) % device.schedule.size()];
            double p0 = std::clamp(born_prob(probe, pair.f0), 0.0, 1.0);
            return rng.bernoulli(p0) ? 0 : 1;
        }
        case DeviceModel::Kind::postselection_attacker: {
            if (static_cast<std::size_t>(run_index) >= device.predetermined.size())
                throw std::out_of_range("device_response: predetermined string exhausted");
            int outcome = rng.bernoulli(p_zero_ideal) ? 0 : 1;
            int wanted = device.predetermined[static_cast<std::size_t>(run_index)];
            return outcome == wanted ? outcome : no_click_maps_to;
        }
    }
    throw std::logic_error("device_response: unknown device kind");
}

namespace {

double distribution_entropy(const std::array<double, kNumProbes>& p) {
    double h = 0.0;
    for (double q : p)
        if (q > 0.0) h -= q * std::log2(q);
    return h;
}

// Certification through the photon-number pipeline. The pure-probe
// frequencies map linearly onto the coherent probe set (unpolarized, +x, +y,
// +z); the deviation bounds are carried along the same map.
double coherent_certified_rate(const std::array<double, kNumProbes>& freqs,
                               const DeviationBound& dev, double mu, int grid) {
    std::array<double, kNumCoherentProbes> obs = {0.5 * (freqs[0] + freqs[1]), freqs[2], freqs[3],
                                                  freqs[0]};
    std::array<double, kNumCoherentProbes> theta = {0.5 * (dev.theta[0] + dev.theta[1]),
                                                    dev.theta[2], dev.theta[3], dev.theta[0]};
    RateOptions opt;
    opt.grid = grid;
    double worst = 1.0;
    for (int mask = 0; mask < 16; ++mask) {
        std::array<double, kNumCoherentProbes> corner{};
        for (int i = 0; i < kNumCoherentProbes; ++i) {
            double t = (mask >> i & 1) ? theta[i] : -theta[i];
            corner[i] = std::clamp(obs[i] + t, 0.0, 1.0);
        }
        RateFragment frag = worst_case_rate(feasible_box(corner, mu), mu, opt);
        worst = std::min(worst, frag.empty_box ? 0.0 : frag.bits_per_pulse);
    }
    return worst;
}

}  // namespace

double certified_rate_from_statistics(const std::array<double, kNumProbes>& freqs,
                                      const DeviationBound& deviation,
                                      const std::optional<SourceModel>& source, int grid) {
    double rate;
    if (source.has_value()) {
        rate = coherent_certified_rate(freqs, deviation, source->mu, grid);
    } else {
        TomographyResult tomo = solve_tomography(freqs);
        PovmPair worst = worst_case_pair(tomo, deviation, grid);
        rate = certified_randomness(worst, BlochState::plus()).bits_per_run;
    }
    // The grid minimizer can miss an exact zero by its spacing; snap anything
    // below the invariant tolerance so a randomness-free device certifies 0.
    return rate > kTol ? rate : 0.0;
}

ProtocolResult run_protocol(const ProtocolConfig& config, const DeviceModel& device,
                            std::uint64_t seed) {
    if (config.n_runs < 1) throw std::invalid_argument("run_protocol: n_runs < 1");
    if (config.test_fraction <= 0.0 || config.test_fraction >= 1.0)
        throw std::invalid_argument("run_protocol: test_fraction outside (0,1)");
    if (config.epsilon <= 0.0 || config.epsilon >= 1.0)
        throw std::invalid_argument("run_protocol: epsilon outside (0,1)");
    double psum = 0.0;
    for (double p : config.probe_distribution) {
        if (p < 0.0) throw std::invalid_argument("run_protocol: negative probe probability");
        psum += p;
    }
    if (std::abs(psum - 1.0) > kTol)
        throw std::invalid_argument("run_protocol: probe distribution must sum to 1");

    ProtocolResult result;
    for (std::int64_t i = 0; i < config.n_runs; ++i) {
        RunRng rng(seed, static_cast<std::uint64_t>(i));
        if (rng.uniform() < config.test_fraction) {
            double u = rng.uniform();
            int probe = 0;
            double acc = 0.0;
            for (int k = 0; k < kNumProbes; ++k) {
                acc += config.probe_distribution[k];
                if (u < acc || k == kNumProbes - 1) {
                    probe = k;
                    break;
                }
            }
            int bit = device_response(device, probe_states()[probe], rng, i,
                                      config.no_click_maps_to);
            result.counts.probes[probe].trials++;
            if (bit == 0) result.counts.probes[probe].zeros++;
        } else {
            int bit =
                device_response(device, BlochState::plus(), rng, i, config.no_click_maps_to);
            result.generation_bits.push_back(bit);
        }
    }
    result.generation_runs = static_cast<std::int64_t>(result.generation_bits.size());

    result.seed.subset_selection_bits =
        subset_selection_seed_bits(config.n_runs, config.test_fraction);
    std::int64_t n_test = config.n_runs - result.generation_runs;
    result.seed.probe_choice_bits =
        static_cast<double>(n_test) * distribution_entropy(config.probe_distribution);

    for (const auto& p : result.counts.probes) {
        if (p.trials == 0) {
            result.aborted = true;
            result.diagnostic = "a probe state was never sent; cannot run tomography";
            return result;
        }
    }
    if (result.generation_runs == 0) {
        result.aborted = true;
        result.diagnostic = "no generation runs";
        return result;
    }

    const auto freqs = result.counts.frequencies();
    result.tomo = solve_tomography(freqs);

    FluctuationInput fin;
    for (int i = 0; i < kNumProbes; ++i) fin.n_test[i] = result.counts.probes[i].trials;
    fin.n_gen = result.generation_runs;
    fin.observed = freqs;
    fin.epsilon = config.epsilon;
    result.deviation = deviation_for_epsilon(fin);

    result.certified_bits_per_run =
        certified_rate_from_statistics(freqs, result.deviation, config.source, 48);

    const double deduction = 2.0 * std::log2(1.0 / config.epsilon);
    double len = static_cast<double>(result.generation_runs) * result.certified_bits_per_run -
                 deduction;
    result.extractable_length = static_cast<std::int64_t>(std::floor(std::max(len, 0.0)));
    if (result.certified_bits_per_run <= 0.0) {
        result.aborted = true;
        result.diagnostic = "certified rate is zero; the observed statistics admit a "
                            "randomness-free device";
    }
    return result;
}

double empirical_min_entropy(const BitVec& bits) {
    if (bits.empty()) throw std::invalid_argument("empirical_min_entropy: empty stream");
    std::size_t ones = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) ones += static_cast<std::size_t>(bits.get(i));
    double p1 = static_cast<double>(ones) / static_cast<double>(bits.size());
    return -std::log2(std::max(p1, 1.0 - p1));
}

AttackDemo run_attack_demo(std::int64_t n_runs, std::uint64_t seed, double test_fraction) {
    ProtocolConfig config;
    config.n_runs = n_runs;
    config.test_fraction = test_fraction;
    config.no_click_maps_to = 0;  // declared losses become output 0

    DeviceModel device = DeviceModel::attacker_from_seed(n_runs, seed ^ 0xA77AC4E25EEDull);
    ProtocolResult result = run_protocol(config, device, seed);

    AttackDemo demo;
    demo.generation_runs = result.generation_runs;
    if (result.generation_runs > 0) {
        std::size_t ones = 0;
        for (std::size_t i = 0; i < result.generation_bits.size(); ++i)
            ones += static_cast<std::size_t>(result.generation_bits.get(i));
        demo.one_frequency = static_cast<double>(ones) / static_cast<double>(result.generation_runs);
        demo.empirical_bits = empirical_min_entropy(result.generation_bits);
    }
    demo.tomo = result.tomo;
    demo.certified_rate = result.certified_bits_per_run;
    return demo;
}

}  // namespace mdiq
