#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "zeropi/circuit.hpp"

namespace zp::test {

inline const nlohmann::json& frozen() {
  static const nlohmann::json j = [] {
    std::ifstream in(std::string(ZP_ORACLE_DIR) + "/frozen.json");
    if (!in) throw std::runtime_error("frozen.json not found");
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline CircuitParams anchor() { return CircuitParams::from_energies(0.165, 1e-3, 1.75e-4, 0.378); }

inline BasisSpec small_basis() {
  BasisSpec b;
  b.n_charge_max = 20;
  b.n_fock_phi = 200;
  return b;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace zp::test
