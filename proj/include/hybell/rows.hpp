#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hybell/cavity.hpp"
#include "hybell/constants.hpp"
#include "hybell/errors.hpp"

// Named cavity parameter rows.  Lab-facing frequencies are nu/2pi in MHz and
// are converted to angular rad/us when building CavityParams.  The detuning
// is specified through the ratio g/Delta (dispersive margin), the
// displacement beam splitter through its power reflectivity rBS2, and the
// kept-mode amplitude target through alpha_target.

namespace hybell {

struct RowSpec {
  std::string name;
  double g_MHz = 0.0;
  double kappa_b_MHz = 0.0;
  double kappa_c_MHz = 0.0;
  double kappa_L_MHz = 0.0;
  double Gamma_MHz = 0.0;
  double gOverDelta = 0.1;
  double rBS2 = 1e-3;
  double alpha_target = 2.1;

  double kappa_MHz() const { return kappa_b_MHz + kappa_c_MHz + kappa_L_MHz; }
  double alpha_tilde_target_sq() const { return alpha_target * alpha_target; }

  void validate() const {
    if (name.empty()) throw domain_error("RowSpec: empty row name");
    if (!(g_MHz >= 0.0 && kappa_b_MHz >= 0.0 && kappa_c_MHz > 0.0 &&
          kappa_L_MHz >= 0.0 && Gamma_MHz > 0.0))
      throw domain_error("RowSpec '" + name + "': rates must be >= 0 (kappa_c, Gamma > 0)");
    if (!(gOverDelta > 0.0))
      throw domain_error("RowSpec '" + name + "': gOverDelta must be > 0");
    if (!(rBS2 >= 0.0 && rBS2 < 1.0))
      throw domain_error("RowSpec '" + name + "': rBS2 must lie in [0, 1)");
    if (!(alpha_target > 0.0))
      throw domain_error("RowSpec '" + name + "': alpha_target must be > 0");
  }

  CavityParams cavity() const {
    validate();
    CavityParams p;
    p.g = mhz_to_angular(g_MHz);
    p.kappa_b = mhz_to_angular(kappa_b_MHz);
    p.kappa_c = mhz_to_angular(kappa_c_MHz);
    p.kappa_L = mhz_to_angular(kappa_L_MHz);
    p.Gamma = mhz_to_angular(Gamma_MHz);
    p.omega_c = 0.0;
    p.Delta = p.g / gOverDelta;
    p.r_BS = std::sqrt(rBS2);
    return p;
  }
};

namespace row_detail {

// Mirror splits used by the built-in rows.  The published parameter sets fix
// only the total kappa and the asymmetry factor f_cav = (kappa_b+kappa_L)/
// kappa_c; the split below between back-mirror transmission and loss is our
// documented choice.
inline RowSpec sym_loss(const std::string& name, double g, double kappa,
                        double Gamma) {
  // kappa_b = kappa_c, kappa_L = 1.5 kappa_c  ->  f_cav = 10/4
  RowSpec r;
  r.name = name;
  r.g_MHz = g;
  r.Gamma_MHz = Gamma;
  r.kappa_c_MHz = kappa / 3.5;
  r.kappa_b_MHz = r.kappa_c_MHz;
  r.kappa_L_MHz = 1.5 * r.kappa_c_MHz;
  return r;
}

inline RowSpec asym_loss(const std::string& name, double g, double kappa,
                         double Gamma) {
  // kappa_b = 0.04 kappa_c, kappa_L = 0.10 kappa_c  ->  f_cav = 14/100
  RowSpec r;
  r.name = name;
  r.g_MHz = g;
  r.Gamma_MHz = Gamma;
  r.kappa_c_MHz = kappa / 1.14;
  r.kappa_b_MHz = 0.04 * r.kappa_c_MHz;
  r.kappa_L_MHz = 0.10 * r.kappa_c_MHz;
  return r;
}

inline RowSpec asym(const std::string& name, double g, double kappa,
                    double Gamma) {
  // kappa_b = 0.04 kappa_c, kappa_L = 0  ->  f_cav = 4/100
  RowSpec r;
  r.name = name;
  r.g_MHz = g;
  r.Gamma_MHz = Gamma;
  r.kappa_c_MHz = kappa / 1.04;
  r.kappa_b_MHz = 0.04 * r.kappa_c_MHz;
  r.kappa_L_MHz = 0.0;
  return r;
}

}  // namespace row_detail

// The six benchmark rows: two atomic species (cesium-like g=34, kappa=4.1,
// Gamma=2.6; rubidium-like g=5, Gamma=3) under different mirror budgets.
inline std::vector<RowSpec> builtin_rows() {
  using namespace row_detail;
  return {
      sym_loss("cs-sym", 34.0, 4.1, 2.6),
      asym_loss("mpq-asym", 34.0, 4.1, 2.6),
      asym("cs-asym-lossless", 34.0, 4.1, 2.6),
      asym_loss("rb-actual", 5.0, 3.0, 3.0),
      asym("rb-lossless", 5.0, 3.0, 3.0),
      asym("rb-lowkappa", 5.0, 1.5, 3.0),
  };
}

inline const RowSpec& find_row(const std::vector<RowSpec>& rows,
                               const std::string& name) {
  for (const auto& r : rows)
    if (r.name == name) return r;
  std::string known;
  for (const auto& r : rows) known += (known.empty() ? "" : ", ") + r.name;
  throw domain_error("unknown row '" + name + "' (known rows: " + known + ")");
}

}  // namespace hybell
