#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdm {

/// Arbitrary-precision signed integer, little-endian base 2^32 magnitude.
/// Only the operations the exact determinant kernel needs: no division.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v);  // NOLINT: implicit by design

  bool is_zero() const { return sign_ == 0; }
  int sign() const { return sign_; }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
  BigInt& operator-=(const BigInt& o) { return *this = *this - o; }

  /// *this * 2^k, k >= 0.
  BigInt shifted_left(unsigned k) const;

  bool operator==(const BigInt& o) const;

  /// Residue modulo an odd prime p < 2^63 (sign applied).
  uint64_t mod_u64(uint64_t p) const;

  /// Approximate double value (for diagnostics only).
  double to_double() const;
  std::string to_string() const;  // decimal, for diagnostics

  static BigInt pow_uint(uint64_t base, unsigned exp);

 private:
  int sign_ = 0;                 // -1, 0, +1
  std::vector<uint32_t> mag_;    // normalized: no leading zero limbs
  void normalize();
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);  // a >= b
};

/// Dyadic rational: num * 2^exp2. Closed under +, -, * which is all the
/// determinant expansions require; doubles convert exactly.
struct Dyadic {
  BigInt num;
  int exp2 = 0;

  Dyadic() = default;
  Dyadic(BigInt n, int e) : num(std::move(n)), exp2(e) {}
  static Dyadic from_double(double x);
  static Dyadic from_int(long long v) { return Dyadic(BigInt(v), 0); }

  bool is_zero() const { return num.is_zero(); }
  int sign() const { return num.sign(); }

  Dyadic operator+(const Dyadic& o) const;
  Dyadic operator-(const Dyadic& o) const;
  Dyadic operator*(const Dyadic& o) const;
  Dyadic operator-() const { return Dyadic(-num, exp2); }

  double to_double() const;
};

}  // namespace cdm
