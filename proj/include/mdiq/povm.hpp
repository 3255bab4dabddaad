#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace mdiq {

using Vec3 = std::array<double, 3>;

// Absolute tolerance for all invariant checks. Quantities are O(1).
inline constexpr double kTol = 1e-9;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 add(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 sub(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 scale(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

/// A qubit density matrix represented by its Bloch vector (x, y, z).
struct BlochState {
    Vec3 r{0.0, 0.0, 0.0};

    bool physical(double tol = kTol) const { return norm(r) <= 1.0 + tol; }
    bool pure(double tol = kTol) const { return std::abs(norm(r) - 1.0) <= tol; }

    static BlochState zero() { return {{0.0, 0.0, 1.0}}; }
    static BlochState one() { return {{0.0, 0.0, -1.0}}; }
    static BlochState plus() { return {{1.0, 0.0, 0.0}}; }
    static BlochState plus_i() { return {{0.0, 1.0, 0.0}}; }
};

/// One effect of a two-outcome qubit POVM: a * (I + n . sigma).
struct PovmEffect {
    double a = 0.0;
    Vec3 n{0.0, 0.0, 0.0};

    bool valid(double tol = kTol) const {
        return a >= -tol && norm(n) <= 1.0 + tol && a * (1.0 + norm(n)) <= 1.0 + tol;
    }
};

/// Two-outcome POVM {F0, F1} with F0 + F1 = I.
struct PovmPair {
    PovmEffect f0;
    PovmEffect f1;
};

/// Builds the pair with F0 = a1 (I + n1 . sigma) and F1 its complement.
PovmPair povm_from_effect(double a1, const Vec3& n1);

struct DecompBranch {
    double p = 0.0;
    BlochState psi;  // unit Bloch vector
};

/// Mixture of rank-one projector branches plus a deterministic identity mass c.
struct Decomposition {
    double c = 0.0;
    std::vector<DecompBranch> branches;

    double branch_weight() const {
        double s = 0.0;
        for (const auto& b : branches) s += b.p;
        return s;
    }
};

struct PovmViolation {
    std::string constraint;
    double residual = 0.0;
};

/// Probability of the given outcome: a (1 + n . r). Throws on invalid arguments.
double born_prob(const BlochState& state, const PovmEffect& effect);

/// Every violated completeness/positivity constraint with its numeric residual.
std::vector<PovmViolation> validate_povm(const PovmPair& pair, double tol = kTol);

inline bool is_valid_povm(const PovmPair& pair, double tol = kTol) {
    return validate_povm(pair, tol).empty();
}

struct CanonicalPair {
    PovmPair pair;
    bool swapped = false;
};

/// Relabels outcomes if needed so that f0.a <= f1.a. The swapped flag must be
/// propagated to bit accounting at the protocol level.
CanonicalPair canonicalize(const PovmPair& pair);

/// The explicit decomposition that splits the isotropic mass of F0 into the
/// {|0>,|1>} projector pair and keeps one projector along n1/|n1|.
/// Requires a canonical pair (f0.a <= f1.a).
Decomposition example_decomposition(const PovmPair& pair);

/// Sum of p_i * Hmin(|<input|psi_i>|^2) over the branches; the deterministic
/// mass contributes nothing. The input must be pure.
double decomposition_randomness(const Decomposition& d, const BlochState& input);

}  // namespace mdiq
