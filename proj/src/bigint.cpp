#include "cdm/bigint.hpp"

#include <cmath>
#include <cstdlib>

namespace cdm {

BigInt::BigInt(long long v) {
  if (v == 0) return;
  sign_ = v > 0 ? 1 : -1;
  unsigned long long m = v > 0 ? (unsigned long long)v : 0ULL - (unsigned long long)v;
  while (m) {
    mag_.push_back((uint32_t)(m & 0xffffffffu));
    m >>= 32;
  }
}

void BigInt::normalize() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  const std::vector<uint32_t>& x = a.size() >= b.size() ? a : b;
  const std::vector<uint32_t>& y = a.size() >= b.size() ? b : a;
  std::vector<uint32_t> r(x.size() + 1, 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    uint64_t s = carry + x[i] + (i < y.size() ? y[i] : 0);
    r[i] = (uint32_t)s;
    carry = s >> 32;
  }
  r[x.size()] = (uint32_t)carry;
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r(a.size(), 0);
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t s = (int64_t)a[i] - borrow - (i < b.size() ? (int64_t)b[i] : 0);
    if (s < 0) {
      s += ((int64_t)1 << 32);
      borrow = 1;
    } else {
      borrow = 0;
    }
    r[i] = (uint32_t)s;
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  r.sign_ = -r.sign_;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  if (sign_ == 0) return o;
  if (o.sign_ == 0) return *this;
  BigInt r;
  if (sign_ == o.sign_) {
    r.sign_ = sign_;
    r.mag_ = add_mag(mag_, o.mag_);
  } else {
    int c = cmp_mag(mag_, o.mag_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.sign_ = sign_;
      r.mag_ = sub_mag(mag_, o.mag_);
    } else {
      r.sign_ = o.sign_;
      r.mag_ = sub_mag(o.mag_, mag_);
    }
  }
  r.normalize();
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  if (sign_ == 0 || o.sign_ == 0) return BigInt();
  BigInt r;
  r.sign_ = sign_ * o.sign_;
  r.mag_.assign(mag_.size() + o.mag_.size(), 0);
  for (size_t i = 0; i < mag_.size(); ++i) {
    uint64_t carry = 0;
    uint64_t ai = mag_[i];
    for (size_t j = 0; j < o.mag_.size(); ++j) {
      uint64_t cur = r.mag_[i + j] + ai * o.mag_[j] + carry;
      r.mag_[i + j] = (uint32_t)cur;
      carry = cur >> 32;
    }
    size_t k = i + o.mag_.size();
    while (carry) {
      uint64_t cur = r.mag_[k] + carry;
      r.mag_[k] = (uint32_t)cur;
      carry = cur >> 32;
      ++k;
    }
  }
  r.normalize();
  return r;
}

BigInt BigInt::shifted_left(unsigned k) const {
  if (sign_ == 0 || k == 0) return *this;
  BigInt r;
  r.sign_ = sign_;
  unsigned limbs = k / 32, bits = k % 32;
  r.mag_.assign(mag_.size() + limbs + 1, 0);
  for (size_t i = 0; i < mag_.size(); ++i) {
    uint64_t v = (uint64_t)mag_[i] << bits;
    r.mag_[i + limbs] |= (uint32_t)v;
    r.mag_[i + limbs + 1] |= (uint32_t)(v >> 32);
  }
  r.normalize();
  return r;
}

bool BigInt::operator==(const BigInt& o) const {
  return sign_ == o.sign_ && mag_ == o.mag_;
}

uint64_t BigInt::mod_u64(uint64_t p) const {
  unsigned __int128 r = 0;
  for (size_t i = mag_.size(); i-- > 0;) r = ((r << 32) + mag_[i]) % p;
  uint64_t v = uint64_t(r);
  if (sign_ < 0 && v != 0) v = p - v;
  return v;
}

double BigInt::to_double() const {
  double v = 0;
  for (size_t i = mag_.size(); i-- > 0;) v = v * 4294967296.0 + mag_[i];
  return sign_ < 0 ? -v : v;
}

std::string BigInt::to_string() const {
  if (sign_ == 0) return "0";
  // repeated division by 10^9 on a copy of the magnitude
  std::vector<uint32_t> m = mag_;
  std::string out;
  while (!m.empty()) {
    uint64_t rem = 0;
    for (size_t i = m.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | m[i];
      m[i] = (uint32_t)(cur / 1000000000u);
      rem = cur % 1000000000u;
    }
    while (!m.empty() && m.back() == 0) m.pop_back();
    char buf[16];
    if (m.empty())
      snprintf(buf, sizeof buf, "%llu", (unsigned long long)rem);
    else
      snprintf(buf, sizeof buf, "%09llu", (unsigned long long)rem);
    out = std::string(buf) + out;
  }
  return (sign_ < 0 ? "-" : "") + out;
}

BigInt BigInt::pow_uint(uint64_t base, unsigned exp) {
  BigInt r(1), b((long long)base);
  while (exp) {
    if (exp & 1) r = r * b;
    b = b * b;
    exp >>= 1;
  }
  return r;
}

Dyadic Dyadic::from_double(double x) {
  if (x == 0.0) return Dyadic();
  int e = 0;
  double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
  long long mi = (long long)std::ldexp(m, 53);  // exact: 53-bit integer
  return Dyadic(BigInt(mi), e - 53);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (exp2 == o.exp2) return Dyadic(num + o.num, exp2);
  if (exp2 > o.exp2)
    return Dyadic(num.shifted_left(unsigned(exp2 - o.exp2)) + o.num, o.exp2);
  return Dyadic(num + o.num.shifted_left(unsigned(o.exp2 - exp2)), exp2);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::operator*(const Dyadic& o) const {
  return Dyadic(num * o.num, exp2 + o.exp2);
}

double Dyadic::to_double() const { return std::ldexp(num.to_double(), exp2); }

}  // namespace cdm
