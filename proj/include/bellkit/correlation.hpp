#pragma once

#include <cmath>
#include <vector>

#include "bellkit/rational.hpp"
#include "bellkit/scenario.hpp"

namespace bellkit {

/// Flat joint probability table P(a,b|x,y) over a scenario, in the library's
/// (x, y, a, b) lexicographic layout. T is Rational for exact work and double
/// for quantum models.
template <typename T>
struct CorrelationTable {
    Scenario scenario;
    std::vector<T> values;

    explicit CorrelationTable(Scenario s)
        : scenario(std::move(s)), values(static_cast<std::size_t>(scenario.dim()), T(0)) {}

    CorrelationTable(Scenario s, std::vector<T> v) : scenario(std::move(s)), values(std::move(v)) {
        if (static_cast<int>(values.size()) != scenario.dim())
            throw ScenarioMismatchError("table length does not match scenario dimension");
    }

    T& p(int x, int y, int a, int b) { return values[scenario.index(x, y, a, b)]; }
    const T& p(int x, int y, int a, int b) const { return values[scenario.index(x, y, a, b)]; }

    /// Alice marginal for setting x, summed over Bob's outcomes at setting y.
    T alice_marginal(int a, int x, int y) const {
        T s(0);
        for (int b = 0; b < scenario.bob_outcomes(y); ++b) s += p(x, y, a, b);
        return s;
    }

    /// Bob marginal for setting y, summed over Alice's outcomes at setting x.
    T bob_marginal(int b, int y, int x) const {
        T s(0);
        for (int a = 0; a < scenario.alice_outcomes(x); ++a) s += p(x, y, a, b);
        return s;
    }

    friend bool operator==(const CorrelationTable& lhs, const CorrelationTable& rhs) {
        return lhs.scenario == rhs.scenario && lhs.values == rhs.values;
    }
};

using CorrelationVector = CorrelationTable<Rational>;
using CorrelationTableD = CorrelationTable<double>;

inline bool is_normalized(const CorrelationVector& t) {
    const Scenario& s = t.scenario;
    for (int x = 0; x < s.alice_settings(); ++x) {
        for (int y = 0; y < s.bob_settings(); ++y) {
            Rational sum(0);
            for (int a = 0; a < s.alice_outcomes(x); ++a)
                for (int b = 0; b < s.bob_outcomes(y); ++b) sum += t.p(x, y, a, b);
            if (sum != 1) return false;
        }
    }
    return true;
}

/// Exact no-signaling check: Alice's marginals must not depend on y, Bob's on x.
/// Rejects unnormalized tables up front so that a "true" really means the table
/// lies in the no-signaling polytope (nonnegativity is checked too).
inline bool is_nonsignaling(const CorrelationVector& t) {
    if (!is_normalized(t))
        throw UnnormalizedError("no-signaling test requires a normalized table");
    const Scenario& s = t.scenario;
    for (const Rational& v : t.values)
        if (v < 0) return false;
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int a = 0; a < s.alice_outcomes(x); ++a)
            for (int y = 1; y < s.bob_settings(); ++y)
                if (t.alice_marginal(a, x, y) != t.alice_marginal(a, x, 0)) return false;
    for (int y = 0; y < s.bob_settings(); ++y)
        for (int b = 0; b < s.bob_outcomes(y); ++b)
            for (int x = 1; x < s.alice_settings(); ++x)
                if (t.bob_marginal(b, y, x) != t.bob_marginal(b, y, 0)) return false;
    return true;
}

/// Deterministic local point: Alice answers alice_choice[x] to setting x,
/// Bob answers bob_choice[y] to setting y, with probability one.
inline CorrelationVector deterministic_point(const Scenario& s, const std::vector<int>& alice_choice,
                                             const std::vector<int>& bob_choice) {
    if (static_cast<int>(alice_choice.size()) != s.alice_settings() ||
        static_cast<int>(bob_choice.size()) != s.bob_settings())
        throw ScenarioMismatchError("deterministic assignment length mismatch");
    for (int x = 0; x < s.alice_settings(); ++x)
        if (alice_choice[x] < 0 || alice_choice[x] >= s.alice_outcomes(x))
            throw ScenarioMismatchError("deterministic Alice outcome out of range");
    for (int y = 0; y < s.bob_settings(); ++y)
        if (bob_choice[y] < 0 || bob_choice[y] >= s.bob_outcomes(y))
            throw ScenarioMismatchError("deterministic Bob outcome out of range");
    CorrelationVector t(s);
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int y = 0; y < s.bob_settings(); ++y) t.p(x, y, alice_choice[x], bob_choice[y]) = 1;
    return t;
}

/// White noise: every outcome pair uniformly likely at every setting pair.
inline CorrelationVector uniform_point(const Scenario& s) {
    CorrelationVector t(s);
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int y = 0; y < s.bob_settings(); ++y) {
            const Rational u(1, s.alice_outcomes(x) * s.bob_outcomes(y));
            for (int a = 0; a < s.alice_outcomes(x); ++a)
                for (int b = 0; b < s.bob_outcomes(y); ++b) t.p(x, y, a, b) = u;
        }
    return t;
}

/// Enumerates all deterministic local points (the local polytope's vertices).
inline std::vector<CorrelationVector> deterministic_points(const Scenario& s) {
    std::vector<CorrelationVector> out;
    std::vector<int> ac(s.alice_settings(), 0), bc(s.bob_settings(), 0);
    auto advance = [](std::vector<int>& digits, const std::vector<int>& radix) {
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (++digits[i] < radix[i]) return true;
            digits[i] = 0;
        }
        return false;
    };
    do {
        std::fill(bc.begin(), bc.end(), 0);
        do {
            out.push_back(deterministic_point(s, ac, bc));
        } while (advance(bc, s.bob()));
    } while (advance(ac, s.alice()));
    return out;
}

/// Largest absolute signaling residual of a numeric table, for diagnostics.
inline double max_nonsignaling_residual(const CorrelationTableD& t) {
    const Scenario& s = t.scenario;
    double worst = 0.0;
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int a = 0; a < s.alice_outcomes(x); ++a)
            for (int y = 1; y < s.bob_settings(); ++y)
                worst = std::max(worst,
                                 std::abs(t.alice_marginal(a, x, y) - t.alice_marginal(a, x, 0)));
    for (int y = 0; y < s.bob_settings(); ++y)
        for (int b = 0; b < s.bob_outcomes(y); ++b)
            for (int x = 1; x < s.alice_settings(); ++x)
                worst = std::max(worst, std::abs(t.bob_marginal(b, y, x) - t.bob_marginal(b, y, 0)));
    return worst;
}

inline double max_normalization_residual(const CorrelationTableD& t) {
    const Scenario& s = t.scenario;
    double worst = 0.0;
    for (int x = 0; x < s.alice_settings(); ++x)
        for (int y = 0; y < s.bob_settings(); ++y) {
            double sum = 0.0;
            for (int a = 0; a < s.alice_outcomes(x); ++a)
                for (int b = 0; b < s.bob_outcomes(y); ++b) sum += t.p(x, y, a, b);
            worst = std::max(worst, std::abs(sum - 1.0));
        }
    return worst;
}

} // namespace bellkit
