#pragma once
// Generated by tests/oracles/generate_oracles.py; do not edit.

namespace oracle {
inline constexpr double zeta3 = 1.2020569031595942;  // mpmath zeta(3)
inline constexpr double li3_03413 = 0.35759160453546107;  // mpmath polylog(3, 0.3413)
inline constexpr double li3_025 = 0.2584613957965733;  // mpmath polylog(3, 0.25)
inline constexpr double geometric_exp_sum = 1.0819767068693265;  // 1/2 + 1/(e-1)
inline constexpr double si_logband_static = 12.03175522516645;  // 1 + (48/pi) ln((4.62/3.22)^2)
inline constexpr double dc_excess_310K_xi1 = 5.2764094235763405e-11;  // sigma_SI / (eps_vac xi_1)
inline constexpr double debye_kappa_si_dark = 5429919.646014735;  // sqrt(e^2 n / (eps_vac eps0 kB T))
inline constexpr double ideal_metal_E_100nm = -4.3337525748258456e-07;  // -pi^2 hbar c/(720 a^3)
inline constexpr double ideal_metal_E_1um = -4.3337525748258456e-10;  // -pi^2 hbar c/(720 a^3)
inline constexpr double sio2_plates_1um_300K = -5.790931913672109e-11;  // scipy Matsubara sum, sio2 oscillator
inline constexpr double sio2_plates_100nm_300K = -5.31614397791555e-08;  // scipy Matsubara sum, sio2 oscillator
inline constexpr double sio2_plates_1um_zeroT = -5.405795903922785e-11;  // scipy zeta integral, sio2 oscillator
inline constexpr double rb_sio2_atom_1um_300K = -7.940159299259627e-32;  // scipy Matsubara sum, Rb on sio2
inline constexpr double T_eff_1um = 1144.9422596038391;  // hbar c/(2 a kB)
inline constexpr double asym_entropy_plates_1um_20K = 4.961581080881669e-16;  // (3 kB/16 pi a^2) zeta3 r0^2 (eps0+1) t^2
inline constexpr double dc_residual_plates_1um = 2.319537397692167e-13;  // (kB/16 pi a^2)(zeta3 - Li3(r0^2))
inline constexpr double dc_residual_atom_1um = 6.784256996395329e-35;  // (kB/4a^3)(1-r0) alpha0
inline constexpr double screened_log_integral_K1 = -0.5042628373613095;  // scipy int y ln(1 - rbar^2 e^-y)
inline constexpr double screened_atom_integral_K1 = 1.243413884573287;  // scipy int y^2 rbar e^-y
inline constexpr double classical_T_1um = 22898.845192076784;  // 10 hbar c/(a kB)
inline constexpr double classical_plates_1um = -2.2490536391967604e-09;  // -kB T Li3(r0^2)/(16 pi a^2)
}  // namespace oracle
