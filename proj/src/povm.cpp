#include "mdiq/povm.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdiq {

PovmPair povm_from_effect(double a1, const Vec3& n1) {
    PovmPair pair;
    pair.f0 = {a1, n1};
    double a2 = 1.0 - a1;
    Vec3 n2{0.0, 0.0, 0.0};
    if (a2 > 0.0) n2 = scale(-a1 / a2, n1);
    pair.f1 = {a2, n2};
    return pair;
}

double born_prob(const BlochState& state, const PovmEffect& effect) {
    if (!state.physical()) throw std::invalid_argument("born_prob: state outside the Bloch ball");
    if (!effect.valid()) throw std::invalid_argument("born_prob: effect is not a valid POVM element");
    return effect.a * (1.0 + dot(effect.n, state.r));
}

std::vector<PovmViolation> validate_povm(const PovmPair& pair, double tol) {
    std::vector<PovmViolation> out;
    auto check = [&](const std::string& name, double residual) {
        if (residual > tol) out.push_back({name, residual});
    };
    check("a1 >= 0", -pair.f0.a);
    check("a2 >= 0", -pair.f1.a);
    check("a1 + a2 = 1", std::abs(pair.f0.a + pair.f1.a - 1.0));
    check("|n1| <= 1", norm(pair.f0.n) - 1.0);
    check("|n2| <= 1", norm(pair.f1.n) - 1.0);
    Vec3 bal = add(scale(pair.f0.a, pair.f0.n), scale(pair.f1.a, pair.f1.n));
    check("a1 n1 + a2 n2 = 0", norm(bal));
    return out;
}

CanonicalPair canonicalize(const PovmPair& pair) {
    if (pair.f0.a > pair.f1.a) return {{pair.f1, pair.f0}, true};
    return {pair, false};
}

Decomposition example_decomposition(const PovmPair& pair) {
    if (!is_valid_povm(pair)) throw std::invalid_argument("example_decomposition: invalid POVM pair");
    if (pair.f0.a > pair.f1.a + kTol)
        throw std::invalid_argument("example_decomposition: pair must be canonical (f0.a <= f1.a)");

    const double a1 = pair.f0.a;
    const double a2 = pair.f1.a;
    const double len = norm(pair.f0.n);

    Decomposition d;
    d.c = a2 - a1;

    const double c1 = a1 * (1.0 - len);
    if (c1 > kTol) {
        d.branches.push_back({c1, BlochState::zero()});
        d.branches.push_back({c1, BlochState::one()});
    }
    const double p_dir = 2.0 * a1 * len;
    if (p_dir > kTol) {
        BlochState psi{scale(1.0 / len, pair.f0.n)};
        d.branches.push_back({p_dir, psi});
    }
    return d;
}

double decomposition_randomness(const Decomposition& d, const BlochState& input) {
    if (!input.pure()) throw std::invalid_argument("decomposition_randomness: input must be pure");
    double total = 0.0;
    for (const auto& b : d.branches) {
        double overlap = 0.5 * (1.0 + std::clamp(dot(input.r, b.psi.r), -1.0, 1.0));
        double top = std::max(overlap, 1.0 - overlap);
        total += b.p * -std::log2(top);
    }
    return std::max(total, 0.0);
}

}  // namespace mdiq
