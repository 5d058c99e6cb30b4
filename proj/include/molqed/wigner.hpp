#pragma once

namespace molqed {

/// Wigner 3-j symbol with twice-integer arguments, e.g.
/// wigner_3j_2(2, 4, 2, 0, 0, 0) = (1 2 1; 0 0 0).
/// Valid for j up to ~80 in double precision (Racah sum with a factorial
/// table).
double wigner_3j_2(int two_j1, int two_j2, int two_j3, int two_m1,
                   int two_m2, int two_m3);

/// Integer-argument convenience wrapper.
double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3);

}  // namespace molqed
