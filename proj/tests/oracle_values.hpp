#pragma once
// Generated by tests/oracle/make_oracles.py. Do not edit.
#include <array>
#include <string_view>
#include <vector>
namespace oracle {
struct DetSample { std::vector<double> x; double det; double value; };
struct DetCase { std::string_view name; int n, k; double q, exponent; std::string_view rule; std::vector<DetSample> samples; };
inline const std::vector<DetCase>& det_cases() {
  static const std::vector<DetCase> cases{
      {"family_a_n3k1q0", 3, 1, 0.0, 1.0, "balanced", {{{0.12, 0.05, 0.3}, 0.90975515691184481199, 0.17898141407717829455}, {{0.03, -0.08, -0.21}, 0.96634843245458340145, 0.11096495146149456094}, {{0.2, 0.1, 0.1}, 1.2525235645061176313, 0.32987260972575566365}}},
      {"family_a_n3k1q1", 3, 1, 1.0, 1.0, "balanced", {{{0.12, 0.05, 0.3}, 0.28600533000000000000, 0.14766050000000000000}, {{0.03, -0.08, -0.21}, 0.18744604661229552962, 0.092901002453175311679}, {{0.2, 0.1, 0.1}, 0.63849039156745857019, 0.27385679774997896964}}},
      {"family_a_n2k1q1", 2, 1, 1.0, 1.0, "balanced", {{{0.15, 0.3}, 0.087187500000000000000, 0.21070901395180125968}, {{-0.07, 0.22}, 0.046147500000000000000, 0.088968449449546475780}, {{0.25, -0.1}, 0.18281250000000000000, 0.37562500000000000000}}},
      {"family_b_n3k1q0s5_4_balanced", 3, 1, 0.0, 1.25, "balanced", {{{0.12, 0.05, 0.3}, 1.4495364073293396151, 0.12704152972873329470}, {{0.03, -0.08, -0.21}, 1.3996554841778631986, 0.071717979868413319586}, {{0.2, 0.1, 0.1}, 1.8644096011376252146, 0.26003037299384546843}}},
      {"family_b_n3k1q1s3_2_balanced", 3, 1, 1.0, 1.5, "balanced", {{{0.12, 0.05, 0.3}, 0.10229241640665612612, 0.053239750411065039102}, {{0.03, -0.08, -0.21}, 0.045227175905047667570, 0.027155081797421344697}, {{0.2, 0.1, 0.1}, 0.34418182789190100898, 0.12949888427026120426}}},
      {"family_b_n3k1q1s3_2_printed", 3, 1, 1.0, 1.5, "printed", {{{0.12, 0.05, 0.3}, 1.4723662990527954152, 0.095853580658210155358}, {{0.03, -0.08, -0.21}, 1.2565491532595274983, 0.050499146196880718131}, {{0.2, 0.1, 0.1}, 2.1065729365976910883, 0.21200293831983310597}}},
      {"cylinder_n2q1", 2, 1, 1.0, 1.5, "balanced", {{{0.7, 0.1}, 0.14625000000000000000, 0.28988993269549154580}, {{-0.62, -0.2}, 0.081000000000000000000, 0.16240060376928611615}, {{0.9, 0.05}, 0.29812500000000000000, 0.65329844057948718449}}},
      {"cylinder_n3q1", 3, 1, 1.0, 1.5, "balanced", {{{0.5, 0.4, 0.1}, 0.25072444782593509467, 0.19313386558200323745}, {{-0.6, 0.1, -0.2}, 0.18064489211850711474, 0.14461751457223391661}, {{0.3, -0.55, 0.15}, 0.22002024059858320391, 0.17199544678313211875}}},
      {"radial_n2q0", 2, 1, 0.0, 2.0, "balanced", {{{0.15, 0.3}, 1.0000000000000000000, 0.056250000000000000000}, {{-0.07, 0.22}, 1.0000000000000000000, 0.026650000000000000000}, {{0.25, -0.1}, 1.0000000000000000000, 0.036250000000000000000}}},
      {"radial_n2q1", 2, 1, 1.0, 4.0, "balanced", {{{0.15, 0.3}, 0.00026367187500000000000, 0.00026367187500000000000}, {{-0.07, 0.22}, 0.000059185208333333333333, 0.000059185208333333333333}, {{0.25, -0.1}, 0.00010950520833333333333, 0.00010950520833333333333}}},
      {"radial_n2q1_2", 2, 1, 0.5, 2.6666666666666665, "balanced", {{{0.15, 0.3}, 0.10221303334680785581, 0.010447504185955654742}, {{-0.07, 0.22}, 0.062118753816860946478, 0.0038587395757597764065}, {{0.25, -0.1}, 0.076259964656693459469, 0.0058155822094401355875}}},
      {"radial_n3q1", 3, 1, 1.0, 3.0, "balanced", {{{0.12, 0.05, 0.3}, 0.0047563048001417919907, 0.0047563048001417919907}, {{0.03, -0.08, -0.21}, 0.0015857977546076039638, 0.0015857977546076039638}, {{0.2, 0.1, 0.1}, 0.0020000000000000000000, 0.0020000000000000000000}}},
  };
  return cases;
}
}  // namespace oracle
