#include "molqed/wigner.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "molqed/error.hpp"

namespace molqed {

namespace {

// factorials up to 170! fit in double
constexpr int kMaxFact = 171;

const std::array<double, kMaxFact>& factorials() {
    static const auto table = [] {
        std::array<double, kMaxFact> f{};
        f[0] = 1.0;
        for (int i = 1; i < kMaxFact; ++i) f[i] = f[i - 1] * i;
        return f;
    }();
    return table;
}

double fact(int n) {
    if (n < 0 || n >= kMaxFact) throw NumericsError("factorial out of range");
    return factorials()[n];
}

}  // namespace

double wigner_3j_2(int two_j1, int two_j2, int two_j3, int two_m1,
                   int two_m2, int two_m3) {
    // selection rules
    if (two_m1 + two_m2 + two_m3 != 0) return 0.0;
    if (std::abs(two_m1) > two_j1 || std::abs(two_m2) > two_j2 ||
        std::abs(two_m3) > two_j3)
        return 0.0;
    if ((two_j1 + two_m1) % 2 != 0 || (two_j2 + two_m2) % 2 != 0 ||
        (two_j3 + two_m3) % 2 != 0)
        return 0.0;
    const int t1 = two_j1 + two_j2 - two_j3;
    const int t2 = two_j1 - two_j2 + two_j3;
    const int t3 = -two_j1 + two_j2 + two_j3;
    if (t1 < 0 || t2 < 0 || t3 < 0 || t1 % 2 != 0) return 0.0;

    // Racah formula
    const double delta = std::sqrt(
        fact(t1 / 2) * fact(t2 / 2) * fact(t3 / 2) /
        fact((two_j1 + two_j2 + two_j3) / 2 + 1));

    const double pref = std::sqrt(
        fact((two_j1 + two_m1) / 2) * fact((two_j1 - two_m1) / 2) *
        fact((two_j2 + two_m2) / 2) * fact((two_j2 - two_m2) / 2) *
        fact((two_j3 + two_m3) / 2) * fact((two_j3 - two_m3) / 2));

    const int k_min = std::max(
        {0, (two_j2 - two_j3 - two_m1) / 2, (two_j1 - two_j3 + two_m2) / 2});
    const int k_max = std::min(
        {t1 / 2, (two_j1 - two_m1) / 2, (two_j2 + two_m2) / 2});

    double sum = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        const double den =
            fact(k) * fact(t1 / 2 - k) * fact((two_j1 - two_m1) / 2 - k) *
            fact((two_j2 + two_m2) / 2 - k) *
            fact((two_j3 - two_j2 + two_m1) / 2 + k) *
            fact((two_j3 - two_j1 - two_m2) / 2 + k);
        sum += ((k % 2 == 0) ? 1.0 : -1.0) / den;
    }

    const int phase_exp = (two_j1 - two_j2 - two_m3) / 2;
    const double phase = (((phase_exp % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
    return phase * delta * pref * sum;
}

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
    return wigner_3j_2(2 * j1, 2 * j2, 2 * j3, 2 * m1, 2 * m2, 2 * m3);
}

}  // namespace molqed
