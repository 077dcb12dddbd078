#pragma once

#include <cmath>

namespace ocf {

/// Golden-ratio constants and the published contraction constants.
///
/// G is the positive root of t^2 - t - 1 and is computed from that root at
/// start-up; every other constant is derived from G so the identities
/// g*G = 1, 1 + g = G and g^2 = 1 - g hold to rounding.
struct Constants {
  double G;            // (sqrt(5) + 1) / 2
  double g;            // G - 1 = 1 / G
  double g2;           // g^2, the W1/W2 split point of [0, G]
  double log_G;        // natural log of G
  double inv_3_log_G;  // normalizer 1 / (3 log G) of the invariant measures

  // BV-contraction constants of the transition operator U.
  double theta1;
  double theta2;
  double theta;

  // Targets for the Szusz rate constant.
  double eta_target;
  double eta_inner_sum_target;
};

inline const Constants& constants() {
  // Non-const on purpose: a const local may be constant-folded into read-only
  // storage in one translation unit and dynamically initialized in another.
  static Constants c = [] {
    Constants k{};
    // Positive root of t^2 - t - 1.
    k.G = (1.0 + std::sqrt(5.0)) / 2.0;
    k.g = k.G - 1.0;
    k.g2 = 1.0 - k.g;
    k.log_G = std::log(k.G);
    k.inv_3_log_G = 1.0 / (3.0 * k.log_G);
    k.theta1 = 0.4270508;
    k.theta2 = 0.396312;
    k.theta = 0.8233628;
    k.eta_target = 0.372929;
    k.eta_inner_sum_target = 0.150853;
    return k;
  }();
  return c;
}

}  // namespace ocf
