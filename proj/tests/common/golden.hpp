// Copyright 2026 The dbgas Authors. - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DBGAS_TESTS_GOLDEN_HPP
#define DBGAS_TESTS_GOLDEN_HPP

// Reference values frozen from tests/oracles/compute_golden.py (mpmath,
// 30 significant digits). Regenerate with `python3 compute_golden.py`.

namespace dbgas::golden {

inline constexpr double kGammaHalf = 1.77245385090551602729816748334;
inline constexpr double kK0At1 = 0.421024438240708333335627379213;
inline constexpr double kK1At1 = 0.601907230197234574737540001536;
inline constexpr double kLaplaceLog2 = 18.1294405673087752385107317829;

// int_0^1 ds P_{2s}(sqrt2 * z) int_0^{1-s} s^1(v) dv with |z| = 1.
inline constexpr double kTermN2Beta1T1R1 = 0.564221460329399793898963328564;
// Same integral for beta = 1, t = 0.25, |z| = 1/sqrt2 (unit particle separation).
inline constexpr double kTermN2Beta1T025Unit = 0.0891817001261089490568048724779;

// E[e^{-beta t} K0(sqrt(2 beta)|Z_t|)] / K0(sqrt(2 beta)|z|), Z_t ~ N(z, t I).
inline constexpr double kOneDeltaB1T05R1 = 0.671275638436135440303919517239;
inline constexpr double kOneDeltaB2T025R05 = 0.5;

// log 2 subtracted, Euler-Mascheroni added, unit-disk log energy -1/4.
inline constexpr double kLambdaBeta1UnitDisk = -0.365931515658412448810720031376;

}  // namespace dbgas::golden

#endif  // DBGAS_TESTS_GOLDEN_HPP
