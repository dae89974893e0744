// Regression constants produced by tests/oracles/freeze_constants.py
// (numpy brute-force diagonalization and 40-digit mpmath partial sums).
#pragma once

namespace frozen {

inline constexpr double kF1At1 = 1.3179021514544038949;
inline constexpr double kF2At1 = 1.0480672076316042036;
inline constexpr double kF1At2 = 17.667364444034796543;
inline constexpr double kF2At2 = 402.38851344018730712;

// j_par / (J^2 / (4 g^2 omega)), N-independent
inline constexpr double kJparRatioG3 = 1.06308632872;
inline constexpr double kJparRatioG325 = 1.05261707636;
inline constexpr double kJparRatioG35 = 1.04464126579;
inline constexpr double kJparRatioG4 = 1.03341356421;

inline constexpr double kRvbUnnormalizedNorm = 1.5811388300841893;

// entanglement entropies in bits
inline constexpr double kRvb4Entropy01 = 1.3567796494470397;
inline constexpr double kRvb4Entropy02 = 1.895461844238322;
inline constexpr double kRvb4Entropy0 = 1.0;
inline constexpr double kRvb6Entropy012 = 2.7219280948873621;
inline constexpr double kRvb6Entropy024 = 2.2055912170195784;
inline constexpr double kRvb6Entropy0 = 1.0;

}  // namespace frozen
