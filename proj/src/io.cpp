#include "mdiq/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mdiq {

namespace {
const std::array<std::string, kNumProbes> kProbeNames = {"zero", "one", "plus", "plus_i"};
}

json to_json(const PovmPair& pair) {
    return {{"f0", {{"a", pair.f0.a}, {"n", pair.f0.n}}},
            {"f1", {{"a", pair.f1.a}, {"n", pair.f1.n}}}};
}

PovmPair povm_pair_from_json(const json& j) {
    PovmPair pair;
    pair.f0.a = j.at("f0").at("a").get<double>();
    pair.f0.n = j.at("f0").at("n").get<Vec3>();
    pair.f1.a = j.at("f1").at("a").get<double>();
    pair.f1.n = j.at("f1").at("n").get<Vec3>();
    return pair;
}

TomographyCounts counts_from_json(const json& j) {
    TomographyCounts counts;
    const json& probes = j.at("probes");
    for (int i = 0; i < kNumProbes; ++i) {
        const json& p = probes.at(kProbeNames[i]);
        counts.probes[i].trials = p.at("trials").get<std::int64_t>();
        counts.probes[i].zeros = p.at("zeros").get<std::int64_t>();
    }
    if (!counts.valid())
        throw std::invalid_argument("counts: zeros exceeds trials or negative count");
    return counts;
}

json to_json(const TomographyCounts& counts) {
    json probes;
    for (int i = 0; i < kNumProbes; ++i)
        probes[kProbeNames[i]] = {{"trials", counts.probes[i].trials},
                                  {"zeros", counts.probes[i].zeros}};
    return {{"probes", probes}};
}

json to_json(const TomographyResult& result) {
    return {{"pair", to_json(result.pair)},
            {"raw", {{"a1", result.raw[0]},
                     {"a1_nx", result.raw[1]},
                     {"a1_ny", result.raw[2]},
                     {"a1_nz", result.raw[3]}}},
            {"projected", result.projected}};
}

json to_json(const DeviationBound& bound) {
    return {{"theta", bound.theta},
            {"epsilon_achieved", bound.epsilon_achieved},
            {"reached_target", bound.reached_target}};
}

json to_json(const FeasibleBox& box) {
    auto iv = [](const Interval& i) { return json::array({i.lo, i.hi}); };
    return {{"a1", iv(box.a1)},
            {"a1_nx", iv(box.v_x)},
            {"a1_ny", iv(box.v_y)},
            {"a1_nz", iv(box.v_z)},
            {"empty", box.empty}};
}

json to_json(const RateReport& report) {
    return {{"mu_star", report.mu_star},
            {"bits_per_pulse", report.bits_per_pulse},
            {"bits_per_second", report.bits_per_second},
            {"box", to_json(report.box)},
            {"worst_pair", to_json(report.worst_pair)}};
}

json to_json(const ProtocolResult& result) {
    return {{"counts", to_json(result.counts)},
            {"generation_runs", result.generation_runs},
            {"tomography", to_json(result.tomo)},
            {"deviation", to_json(result.deviation)},
            {"certified_bits_per_run", result.certified_bits_per_run},
            {"extractable_length", result.extractable_length},
            {"seed_bits",
             {{"subset_selection", result.seed.subset_selection_bits},
              {"probe_choice", result.seed.probe_choice_bits}}},
            {"aborted", result.aborted},
            {"diagnostic", result.diagnostic}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_text_file_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << text;
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed for " + path);
}

}  // namespace mdiq
