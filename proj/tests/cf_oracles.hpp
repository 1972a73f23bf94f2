#pragma once

// 50-term continued-fraction expansions of the named constants, computed
// independently with 220-digit arithmetic from the same closed forms.

namespace benford::accept {

struct CfOracle {
  long long a0;
  long long a[50];
  long long max_quotient;
  int index_of_max;  // 1-based among a1..a50
};

inline constexpr CfOracle kCfLog10_0_3 = {
    -1,
    {2,  10, 2, 2, 1, 13, 1, 7, 18, 2, 2, 1, 2, 3,  4, 1, 1,
     14, 2,  44, 1, 3, 1, 14, 2, 2, 1,  1, 2, 30, 1, 1, 3, 2,
     4,  3,  7, 2, 6, 8, 1,  2, 7, 62, 1, 3, 4, 60, 1, 89},
    89,
    50};

inline constexpr CfOracle kCfEx12Log = {
    -1,
    {2, 4, 8, 1, 5, 1, 6, 3, 1, 2, 2, 1, 1, 2, 1, 1, 2,
     1, 66, 5, 1, 1, 2, 1, 3, 1, 2, 1, 1, 3, 1, 3, 2, 3,
     2, 7, 3, 86, 1, 1, 1, 1, 1, 26, 3, 1, 5, 3, 1, 5},
    86,
    38};

inline constexpr CfOracle kCfEx13Log = {
    -1,
    {1, 1, 3, 1, 7, 1, 15, 1, 2, 1, 1, 7, 1, 6, 2, 1, 3,
     1, 1, 2, 4, 1, 1, 2, 3, 8, 1, 2, 1, 1, 2, 1, 2, 1,
     7, 1, 1, 2, 1, 33, 1, 2, 1, 2, 1, 1, 11, 1, 24, 8},
    33,
    40};

inline constexpr CfOracle kCfEx13Arg = {
    0,
    {25, 1, 9, 3, 168, 2, 1, 1, 32, 1, 6, 3, 1, 9, 1, 1, 92,
     2, 13, 2, 1, 1, 10, 2, 5, 1, 3, 1, 1, 1, 1, 3, 1, 2,
     7, 1, 5, 1, 1, 4, 1, 3, 14, 3, 10, 1, 1, 3, 1, 3},
    168,
    5};

inline constexpr CfOracle kCfGolden = {
    1,
    {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1,
     1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1,
     1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
    1,
    1};

}  // namespace benford::accept
