#include "mdiq/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mdiq {

double min_entropy_binary(double p) {
    if (p < -kTol || p > 1.0 + kTol)
        throw std::invalid_argument("min_entropy_binary: probability outside [0,1]");
    p = std::clamp(p, 0.0, 1.0);
    return -std::log2(std::max(p, 1.0 - p));
}

RandomnessValue certified_randomness(const PovmPair& pair, const BlochState& input) {
    if (!is_valid_povm(pair)) throw std::invalid_argument("certified_randomness: invalid POVM pair");
    if (!input.pure()) throw std::invalid_argument("certified_randomness: input must be pure");

    CanonicalPair canon = canonicalize(pair);
    const double a1 = canon.pair.f0.a;
    const Vec3& n1 = canon.pair.f0.n;
    Vec3 axis = scale(1.0 / norm(input.r), input.r);

    // Only the components of n1 orthogonal to the input axis generate output
    // uncertainty; the axial component is deterministic bias.
    const double axial = dot(n1, axis);
    double perp2 = std::clamp(dot(n1, n1) - axial * axial, 0.0, 1.0);
    const double s = std::sqrt(1.0 - perp2);
    double bits = 2.0 * a1 * min_entropy_binary(0.5 * (1.0 + s));
    return {std::clamp(bits, 0.0, 1.0), canon.swapped};
}

PovmPair average_povm(std::span<const PovmPair> pairs, std::span<const double> weights) {
    if (pairs.size() != weights.size() || pairs.empty())
        throw std::invalid_argument("average_povm: pairs/weights size mismatch");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < -kTol) throw std::invalid_argument("average_povm: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > kTol)
        throw std::invalid_argument("average_povm: weights must sum to 1");

    double a1 = 0.0;
    Vec3 v{0.0, 0.0, 0.0};
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (!is_valid_povm(pairs[i])) throw std::invalid_argument("average_povm: invalid pair");
        a1 += weights[i] * pairs[i].f0.a;
        v = add(v, scale(weights[i] * pairs[i].f0.a, pairs[i].f0.n));
    }
    Vec3 n1{0.0, 0.0, 0.0};
    double w = norm(v);
    if (a1 > 0.0 && w > 0.0) {
        // Snap rounding noise back inside the physical set.
        double len = std::min({w / a1, 1.0, (1.0 - a1) / a1});
        n1 = scale(len / w, v);
    }
    return povm_from_effect(a1, n1);
}

namespace {

// Small revised simplex for: min c.p  s.t.  A p = b (4 rows), p >= 0.
// Artificial columns carry a big-M cost; their terminal mass is the
// reconstruction residual.
struct SimplexOut {
    bool ok = false;
    double value = 0.0;     // objective over real columns only
    double residual = 0.0;  // mass left on artificial columns
    std::vector<std::pair<int, double>> support;
};

SimplexOut solve_lp(const std::vector<std::array<double, 4>>& cols,
                    const std::vector<double>& cost, const std::array<double, 4>& b) {
    constexpr int m = 4;
    constexpr double kBigM = 1.0e4;
    constexpr double kPivotTol = 1e-11;
    constexpr double kRcTol = 1e-10;

    const int n_real = static_cast<int>(cols.size());
    std::array<int, m> basis;
    double binv[m][m] = {};
    for (int i = 0; i < m; ++i) {
        basis[i] = n_real + i;  // artificial i
        binv[i][i] = (b[i] >= 0.0) ? 1.0 : -1.0;
    }
    auto col_of = [&](int j, std::array<double, m>& out) {
        if (j < n_real) {
            out = cols[j];
        } else {
            out = {0.0, 0.0, 0.0, 0.0};
            out[j - n_real] = (b[j - n_real] >= 0.0) ? 1.0 : -1.0;
        }
    };
    auto cost_of = [&](int j) { return j < n_real ? cost[j] : kBigM; };

    const long max_iter = 200L * (n_real + m);
    for (long iter = 0; iter < max_iter; ++iter) {
        // y = cB^T Binv
        std::array<double, m> y{};
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i) y[k] += cost_of(basis[i]) * binv[i][k];

        // Dantzig pricing with a Bland fallback late in the run.
        const bool bland = iter > max_iter / 2;
        int enter = -1;
        double best_rc = -kRcTol;
        for (int j = 0; j < n_real; ++j) {
            double rc = cost[j] - (y[0] * cols[j][0] + y[1] * cols[j][1] + y[2] * cols[j][2] +
                                   y[3] * cols[j][3]);
            if (rc < best_rc) {
                enter = j;
                if (bland) break;
                best_rc = rc;
            }
        }
        if (enter < 0) break;  // optimal

        std::array<double, m> aj{};
        col_of(enter, aj);
        std::array<double, m> d{};
        for (int i = 0; i < m; ++i)
            d[i] = binv[i][0] * aj[0] + binv[i][1] * aj[1] + binv[i][2] * aj[2] + binv[i][3] * aj[3];

        std::array<double, m> xb{};
        for (int i = 0; i < m; ++i)
            xb[i] = binv[i][0] * b[0] + binv[i][1] * b[1] + binv[i][2] * b[2] + binv[i][3] * b[3];

        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            if (d[i] > kPivotTol) {
                double ratio = std::max(xb[i], 0.0) / d[i];
                if (leave < 0 || ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol && basis[i] > basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) break;  // unbounded; cannot happen with the mass row present

        double piv = d[leave];
        for (int k = 0; k < m; ++k) binv[leave][k] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            double f = d[i];
            if (f == 0.0) continue;
            for (int k = 0; k < m; ++k) binv[i][k] -= f * binv[leave][k];
        }
        basis[leave] = enter;
    }

    SimplexOut out;
    std::array<double, m> xb{};
    for (int i = 0; i < m; ++i)
        xb[i] = binv[i][0] * b[0] + binv[i][1] * b[1] + binv[i][2] * b[2] + binv[i][3] * b[3];
    for (int i = 0; i < m; ++i) {
        double x = std::max(xb[i], 0.0);
        if (basis[i] < n_real) {
            out.value += cost[basis[i]] * x;
            if (x > 1e-12) out.support.push_back({basis[i], x});
        } else {
            out.residual += x;
        }
    }
    out.ok = true;
    return out;
}

std::vector<Vec3> sphere_grid(int res) {
    std::vector<Vec3> pts;
    pts.reserve(static_cast<size_t>(res) * res + 2);
    pts.push_back({0.0, 0.0, 1.0});
    pts.push_back({0.0, 0.0, -1.0});
    for (int i = 1; i < res; ++i) {
        double theta = std::numbers::pi * i / res;
        double st = std::sin(theta), ct = std::cos(theta);
        for (int j = 0; j < res; ++j) {
            double phi = 2.0 * std::numbers::pi * j / res;
            pts.push_back({st * std::cos(phi), st * std::sin(phi), ct});
        }
    }
    return pts;
}

Vec3 normalized(const Vec3& v) {
    double len = norm(v);
    return len > 0.0 ? scale(1.0 / len, v) : Vec3{0.0, 0.0, 1.0};
}

// Ring of directions at angular radius delta around u.
void add_ring(std::vector<Vec3>& pts, const Vec3& u, double delta, int count) {
    Vec3 ref = std::abs(u[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    Vec3 t1 = normalized(sub(ref, scale(dot(ref, u), u)));
    Vec3 t2 = {u[1] * t1[2] - u[2] * t1[1], u[2] * t1[0] - u[0] * t1[2],
               u[0] * t1[1] - u[1] * t1[0]};
    double cd = std::cos(delta), sd = std::sin(delta);
    for (int k = 0; k < count; ++k) {
        double alpha = 2.0 * std::numbers::pi * k / count;
        Vec3 t = add(scale(std::cos(alpha), t1), scale(std::sin(alpha), t2));
        pts.push_back(normalized(add(scale(cd, u), scale(sd, t))));
    }
}

}  // namespace

OracleResult brute_force_randomness(const PovmPair& pair_in, const BlochState& input,
                                    const OracleConfig& cfg) {
    if (cfg.grid_resolution < 8 || cfg.max_branches < 2)
        throw std::invalid_argument("brute_force_randomness: invalid oracle configuration");
    if (!is_valid_povm(pair_in))
        throw std::invalid_argument("brute_force_randomness: invalid POVM pair");
    if (!input.pure()) throw std::invalid_argument("brute_force_randomness: input must be pure");

    const PovmPair pair = canonicalize(pair_in).pair;
    const double a1 = pair.f0.a;
    const Vec3 n1 = pair.f0.n;
    const Vec3 axis = normalized(input.r);

    OracleResult result;
    if (a1 <= kTol) {
        result.feasible = true;
        return result;  // deterministic device, nothing to decompose
    }

    // Reconstruction target: sum p_i = 2 a1, sum p_i u_i = 2 a1 n1.
    const std::array<double, 4> b = {2.0 * a1, 2.0 * a1 * n1[0], 2.0 * a1 * n1[1],
                                     2.0 * a1 * n1[2]};

    std::vector<Vec3> dirs = sphere_grid(cfg.grid_resolution);
    if (norm(n1) > kTol) {
        dirs.push_back(normalized(n1));
        dirs.push_back(scale(-1.0, normalized(n1)));
    }
    dirs.push_back(axis);
    dirs.push_back(scale(-1.0, axis));

    auto run = [&](const std::vector<Vec3>& cand) {
        std::vector<std::array<double, 4>> cols(cand.size());
        std::vector<double> cost(cand.size());
        for (size_t j = 0; j < cand.size(); ++j) {
            cols[j] = {1.0, cand[j][0], cand[j][1], cand[j][2]};
            double overlap = 0.5 * (1.0 + std::clamp(dot(axis, cand[j]), -1.0, 1.0));
            cost[j] = -std::log2(std::max(overlap, 1.0 - overlap));
        }
        return solve_lp(cols, cost, b);
    };

    SimplexOut sol = run(dirs);

    // Local refinement around the incumbent support directions.
    const double h = std::numbers::pi / cfg.grid_resolution;
    for (int round = 0; round < 2; ++round) {
        if (sol.support.empty()) break;
        std::vector<Vec3> refined = dirs;
        double delta = h / (2 << round);
        for (const auto& [idx, w] : sol.support) {
            add_ring(refined, dirs[idx], 2.0 * delta, 12);
            add_ring(refined, dirs[idx], delta, 12);
        }
        SimplexOut next = run(refined);
        if (next.residual <= sol.residual + 1e-9 && next.value <= sol.value) {
            dirs = std::move(refined);
            sol = std::move(next);
        }
    }

    result.residual = sol.residual;
    result.feasible = sol.residual <= 1e-6;
    result.bits = std::max(sol.value, 0.0);
    for (const auto& [idx, w] : sol.support) result.witness.push_back({dirs[idx], w});
    return result;
}

}  // namespace mdiq
