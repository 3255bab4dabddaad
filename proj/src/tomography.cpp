#include "mdiq/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdiq {

std::array<double, kNumProbes> TomographyCounts::frequencies() const {
    if (!valid()) throw std::invalid_argument("TomographyCounts: zeros > trials or negative count");
    std::array<double, kNumProbes> f{};
    for (int i = 0; i < kNumProbes; ++i) {
        if (probes[i].trials == 0)
            throw std::invalid_argument("TomographyCounts: probe with zero trials");
        f[i] = static_cast<double>(probes[i].zeros) / static_cast<double>(probes[i].trials);
    }
    return f;
}

std::array<double, kNumProbes> predicted_frequencies(const PovmPair& pair) {
    if (!is_valid_povm(pair)) throw std::invalid_argument("predicted_frequencies: invalid pair");
    std::array<double, kNumProbes> f{};
    for (int i = 0; i < kNumProbes; ++i)
        f[i] = std::clamp(born_prob(probe_states()[i], pair.f0), 0.0, 1.0);
    return f;
}

namespace {

// Feasible region in the (a, w = |a n|) plane: the triangle with vertices
// (0,0), (1/2,1/2), (1,0), i.e. w <= a and a + w <= 1.
struct Point2 {
    double a, w;
};

Point2 project_segment(Point2 p, Point2 s0, Point2 s1) {
    double dx = s1.a - s0.a, dy = s1.w - s0.w;
    double t = ((p.a - s0.a) * dx + (p.w - s0.w) * dy) / (dx * dx + dy * dy);
    t = std::clamp(t, 0.0, 1.0);
    return {s0.a + t * dx, s0.w + t * dy};
}

double dist2(Point2 p, Point2 q) {
    return (p.a - q.a) * (p.a - q.a) + (p.w - q.w) * (p.w - q.w);
}

}  // namespace

PovmPair project_to_physical(const std::array<double, 4>& raw) {
    const double a0 = raw[0];
    Vec3 v{raw[1], raw[2], raw[3]};
    const double w0 = norm(v);

    Point2 p{a0, w0};
    Point2 best = p;
    bool inside = w0 <= a0 + kTol && a0 + w0 <= 1.0 + kTol && a0 >= -kTol;
    if (!inside) {
        const Point2 v00{0.0, 0.0}, v05{0.5, 0.5}, v10{1.0, 0.0};
        Point2 cands[3] = {project_segment(p, v00, v05), project_segment(p, v05, v10),
                           project_segment(p, v00, v10)};
        best = cands[0];
        for (int k = 1; k < 3; ++k)
            if (dist2(p, cands[k]) < dist2(p, best)) best = cands[k];
    }

    double a = std::clamp(best.a, 0.0, 1.0);
    double w = std::clamp(best.w, 0.0, std::min(a, 1.0 - a));
    Vec3 n{0.0, 0.0, 0.0};
    if (w0 > 0.0 && a > 0.0) n = scale(w / (w0 * a), v);
    return povm_from_effect(a, n);
}

TomographyResult solve_tomography(const std::array<double, kNumProbes>& freqs) {
    for (double f : freqs)
        if (f < -kTol || f > 1.0 + kTol)
            throw std::invalid_argument("solve_tomography: frequency outside [0,1]");

    TomographyResult result;
    const double a1 = 0.5 * (freqs[0] + freqs[1]);
    result.raw = {a1, freqs[2] - a1, freqs[3] - a1, 0.5 * (freqs[0] - freqs[1])};

    Vec3 v{result.raw[1], result.raw[2], result.raw[3]};
    double w = norm(v);
    if (w <= a1 + kTol && a1 + w <= 1.0 + kTol) {
        // Snap boundary-grazing solutions inside the physical set; the kTol
        // slack on a1 + w would otherwise blow up to kTol / (1 - a1) on the
        // complement effect's direction length.
        double a = std::clamp(a1, 0.0, 1.0);
        Vec3 n{0.0, 0.0, 0.0};
        if (a > 0.0 && w > 0.0) {
            double len = std::min({w / a, 1.0, (1.0 - a) / a});
            n = scale(len / w, v);
        }
        result.pair = povm_from_effect(a, n);
        result.projected = false;
    } else {
        result.pair = project_to_physical(result.raw);
        result.projected = true;
    }
    return result;
}

}  // namespace mdiq
