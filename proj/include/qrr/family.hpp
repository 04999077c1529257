#pragma once

#include <string>

#include "qrr/errors.hpp"

namespace qrr {

/// The (d, e, k) triple indexing a multiparameter Bailey pair family.
/// K = k + d(e-1) = de - d + k is the number of family members.
struct FamilyParams {
  long long d = 1;
  long long e = 1;
  long long k = 1;

  long long K() const { return k + d * (e - 1); }

  /// Modulus of the family's product sides: d(2ed - 2d + 2k + 1) = d(2K + 1).
  long long modulus() const { return d * (2 * K() + 1); }

  void validate() const {
    if (d < 1 || e < 1 || k < 1)
      throw error(errc::bad_parameters, "family parameters must be positive integers");
  }

  std::string str() const {
    return "(" + std::to_string(d) + "," + std::to_string(e) + "," + std::to_string(k) + ")";
  }

  bool operator==(const FamilyParams&) const = default;
};

}  // namespace qrr
