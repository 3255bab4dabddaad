// mdiq: measurement-device-independent QRNG certification pipeline.
//
// Subcommands
//   tomo         solve POVM tomography from a probe-counts JSON file
//   rate         certified rate + extractable length from counts
//   sweep        optimal bits/pulse vs transmittance (CSV or JSON)
//   simulate     run the full protocol against a simulated device
//   attack-demo  post-selection attack scenario, reported side by side
//   extract      Toeplitz extraction over packed bit-stream files
//
// Exit codes: 0 success, 2 invalid input, 3 certification failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdiq/extraction.hpp"
#include "mdiq/io.hpp"
#include "mdiq/protocol.hpp"
#include "mdiq/randomness.hpp"

namespace {

constexpr int kExitInvalidInput = 2;
constexpr int kExitCertificationFailure = 3;

struct CertificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty())
        std::cout << text;
    else
        mdiq::write_text_file_atomic(output_path, text);
}

double eta_from_flags(const std::optional<double>& eta, const std::optional<double>& eta_db) {
    if (eta.has_value() == eta_db.has_value())
        throw CLI::ValidationError("exactly one of --eta / --eta-db is required");
    return eta.has_value() ? *eta : std::pow(10.0, -*eta_db / 10.0);
}

std::string sweep_csv(const std::vector<mdiq::SweepRow>& rows) {
    std::ostringstream out;
    out << "eta,eta_db,mu_star,bits_per_pulse,bits_per_second\n";
    char line[256];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g,%.10g,%.10g\n", r.eta, r.eta_db,
                      r.mu_star, r.bits_per_pulse, r.bits_per_second);
        out << line;
    }
    return out.str();
}

mdiq::json sweep_json(const std::vector<mdiq::SweepRow>& rows) {
    mdiq::json arr = mdiq::json::array();
    for (const auto& r : rows)
        arr.push_back({{"eta", r.eta},
                       {"eta_db", r.eta_db},
                       {"mu_star", r.mu_star},
                       {"bits_per_pulse", r.bits_per_pulse},
                       {"bits_per_second", r.bits_per_second}});
    return arr;
}

int run_tomo(const std::string& counts_path, const std::string& output_path) {
    mdiq::TomographyCounts counts = mdiq::counts_from_json(mdiq::load_json_file(counts_path));
    const auto freqs = counts.frequencies();
    mdiq::TomographyResult result = mdiq::solve_tomography(freqs);

    const auto predicted = mdiq::predicted_frequencies(result.pair);
    std::array<double, mdiq::kNumProbes> residuals{};
    for (int i = 0; i < mdiq::kNumProbes; ++i) residuals[i] = predicted[i] - freqs[i];

    mdiq::json out = mdiq::to_json(result);
    out["observed_frequencies"] = freqs;
    out["predicted_frequencies"] = predicted;
    out["residuals"] = residuals;
    emit(out.dump(2) + "\n", output_path);
    return 0;
}

int run_rate(const std::string& counts_path, double epsilon, std::int64_t n_gen,
             const std::optional<double>& mu, double eta_for_model,
             const std::string& output_path) {
    mdiq::TomographyCounts counts = mdiq::counts_from_json(mdiq::load_json_file(counts_path));
    const auto freqs = counts.frequencies();

    mdiq::FluctuationInput fin;
    for (int i = 0; i < mdiq::kNumProbes; ++i) fin.n_test[i] = counts.probes[i].trials;
    fin.n_gen = n_gen;
    fin.observed = freqs;
    fin.epsilon = epsilon;
    mdiq::DeviationBound deviation = mdiq::deviation_for_epsilon(fin);

    std::optional<mdiq::SourceModel> source;
    if (mu.has_value()) source = mdiq::SourceModel{*mu, eta_for_model};

    double rate = mdiq::certified_rate_from_statistics(freqs, deviation, source);
    double deduction = 2.0 * std::log2(1.0 / epsilon);
    auto extractable = static_cast<std::int64_t>(
        std::floor(std::max(static_cast<double>(n_gen) * rate - deduction, 0.0)));

    mdiq::json out = {{"tomography", mdiq::to_json(mdiq::solve_tomography(freqs))},
                      {"deviation", mdiq::to_json(deviation)},
                      {"certified_bits_per_run", rate},
                      {"extractable_length", extractable},
                      {"epsilon", epsilon},
                      {"n_gen", n_gen}};
    emit(out.dump(2) + "\n", output_path);
    if (rate <= 0.0)
        throw CertificationFailure("certified rate is zero; the observed statistics admit a "
                                   "randomness-free device");
    return 0;
}

int run_sweep(double db_min, double db_max, int points, double rep_rate,
              const std::string& format, const std::string& output_path) {
    std::vector<double> etas;
    for (int i = 0; i < points; ++i) {
        double db = points > 1 ? db_min + (db_max - db_min) * i / (points - 1) : db_min;
        etas.push_back(std::pow(10.0, -db / 10.0));
    }
    auto rows = mdiq::rate_sweep(etas, rep_rate);
    emit(format == "json" ? sweep_json(rows).dump(2) + "\n" : sweep_csv(rows), output_path);
    return 0;
}

int run_simulate(std::int64_t n_runs, const std::optional<double>& eta,
                 const std::optional<double>& eta_db, std::uint64_t seed, double test_fraction,
                 double epsilon, const std::optional<double>& mu, int no_click_to,
                 const std::string& bits_path, const std::string& output_path) {
    mdiq::ProtocolConfig config;
    config.n_runs = n_runs;
    config.test_fraction = test_fraction;
    config.epsilon = epsilon;
    config.no_click_maps_to = no_click_to;
    double eta_lin = eta_from_flags(eta, eta_db);
    if (mu.has_value()) config.source = mdiq::SourceModel{*mu, eta_lin};

    mdiq::ProtocolResult result =
        mdiq::run_protocol(config, mdiq::DeviceModel::honest(eta_lin), seed);
    if (!bits_path.empty()) mdiq::write_bit_file(bits_path, result.generation_bits);
    emit(mdiq::to_json(result).dump(2) + "\n", output_path);
    if (result.aborted) throw CertificationFailure(result.diagnostic);
    return 0;
}

int run_attack_demo(std::int64_t n_runs, std::uint64_t seed, double test_fraction,
                    const std::string& output_path) {
    mdiq::AttackDemo demo = mdiq::run_attack_demo(n_runs, seed, test_fraction);
    mdiq::json out = {{"generation_runs", demo.generation_runs},
                      {"one_frequency", demo.one_frequency},
                      {"empirical_min_entropy", demo.empirical_bits},
                      {"tomography", mdiq::to_json(demo.tomo)},
                      {"certified_bits_per_run", demo.certified_rate}};
    emit(out.dump(2) + "\n", output_path);
    return 0;
}

int run_extract(const std::string& raw_path, const std::string& seed_hex,
                const std::string& seed_path, std::size_t output_length,
                const std::string& bits_path, const std::string& output_path) {
    mdiq::BitVec raw = mdiq::read_bit_file(raw_path);
    if (seed_hex.empty() == seed_path.empty())
        throw CLI::ValidationError("exactly one of --seed-hex / --seed-file is required");
    mdiq::BitVec seed =
        seed_hex.empty() ? mdiq::read_bit_file(seed_path) : mdiq::BitVec::from_hex(seed_hex);

    mdiq::ExtractorSpec spec{raw.size(), output_length};
    if (seed.size() != spec.seed_length())
        throw std::invalid_argument("seed length " + std::to_string(seed.size()) +
                                    " does not match required " +
                                    std::to_string(spec.seed_length()));
    mdiq::BitVec out = mdiq::toeplitz_extract(raw, seed, spec);
    if (!bits_path.empty()) mdiq::write_bit_file(bits_path, out);
    emit(out.to_string() + "\n", output_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loss-tolerant MDI quantum randomness certification pipeline"};
    app.require_subcommand(1);

    std::string counts_path, output_path, format = "csv";
    std::string bits_path, raw_path, seed_hex, seed_path;
    std::optional<double> eta, eta_db, mu;
    double epsilon = 0x1p-100, test_fraction = 0.1, rep_rate = 1e8;
    double db_min = 0.0, db_max = 30.0;
    std::int64_t n_runs = 1000000, n_gen = 0;
    std::uint64_t seed = 1;
    std::size_t output_length = 0;
    int points = 16, no_click_to = 0;

    auto* tomo = app.add_subcommand("tomo", "Solve tomography from a counts file");
    tomo->add_option("counts", counts_path, "Probe-counts JSON file")->required();
    tomo->add_option("-o,--output", output_path, "Write JSON here instead of stdout");

    auto* rate = app.add_subcommand("rate", "Certified rate from a counts file");
    rate->add_option("counts", counts_path, "Probe-counts JSON file")->required();
    rate->add_option("--epsilon", epsilon, "Total failure probability");
    rate->add_option("--n-gen", n_gen, "Number of generation runs")->required();
    rate->add_option("--mu", mu, "Mean photon number; enables the coherent-source analysis");
    rate->add_option("--eta", eta, "Transmittance for the coherent source model");
    rate->add_option("-o,--output", output_path, "Write JSON here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "Optimal rate vs transmittance table");
    sweep->add_option("--eta-db-min", db_min, "Smallest loss in dB");
    sweep->add_option("--eta-db-max", db_max, "Largest loss in dB");
    sweep->add_option("--points", points, "Number of rows")->check(CLI::NonNegativeNumber);
    sweep->add_option("--rep-rate", rep_rate, "Pulses per second");
    sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("-o,--output", output_path, "Write the table here instead of stdout");

    auto* simulate = app.add_subcommand("simulate", "Run the protocol on an honest lossy device");
    simulate->add_option("--n", n_runs, "Total number of runs");
    simulate->add_option("--eta", eta, "Transmittance (linear)");
    simulate->add_option("--eta-db", eta_db, "Transmittance as loss in dB");
    simulate->add_option("--seed", seed, "Master seed");
    simulate->add_option("--test-fraction", test_fraction, "Probability of a test run");
    simulate->add_option("--epsilon", epsilon, "Total failure probability");
    simulate->add_option("--mu", mu, "Mean photon number; enables the coherent-source analysis");
    simulate->add_option("--no-click-to", no_click_to, "Outcome assigned to no-click events")
        ->check(CLI::IsMember({0, 1}));
    simulate->add_option("--bits-out", bits_path, "Write generation bits to this packed file");
    simulate->add_option("-o,--output", output_path, "Write JSON here instead of stdout");

    auto* attack = app.add_subcommand("attack-demo", "Post-selection attack scenario");
    attack->add_option("--n", n_runs, "Total number of runs");
    attack->add_option("--seed", seed, "Master seed");
    attack->add_option("--test-fraction", test_fraction, "Probability of a test run")
        ->default_val(0.2);
    attack->add_option("-o,--output", output_path, "Write JSON here instead of stdout");

    auto* extract = app.add_subcommand("extract", "Toeplitz extraction over bit-stream files");
    extract->add_option("raw", raw_path, "Packed input bit file")->required();
    extract->add_option("--output-length", output_length, "Output bits")->required();
    extract->add_option("--seed-hex", seed_hex, "Seed as a hex string (MSB first)");
    extract->add_option("--seed-file", seed_path, "Seed as a packed bit file");
    extract->add_option("--bits-out", bits_path, "Write output bits to this packed file");
    extract->add_option("-o,--output", output_path, "Write the 0/1 text here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tomo->parsed()) return run_tomo(counts_path, output_path);
        if (rate->parsed())
            return run_rate(counts_path, epsilon, n_gen, mu, eta.value_or(1.0), output_path);
        if (sweep->parsed())
            return run_sweep(db_min, db_max, points, rep_rate, format, output_path);
        if (simulate->parsed())
            return run_simulate(n_runs, eta, eta_db, seed, test_fraction, epsilon, mu,
                                no_click_to, bits_path, output_path);
        if (attack->parsed()) return run_attack_demo(n_runs, seed, test_fraction, output_path);
        if (extract->parsed())
            return run_extract(raw_path, seed_hex, seed_path, output_length, bits_path,
                               output_path);
    } catch (const CertificationFailure& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return kExitCertificationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return 0;
}
