#pragma once

#include <cstdint>
#include <vector>

namespace eulercs {

using Element = std::uint32_t;

// Coefficients over GF(p), constant term first. A monic degree-r polynomial
// has r + 1 entries with the last equal to 1.
using Polynomial = std::vector<std::uint32_t>;

bool is_prime(std::uint64_t value) noexcept;

// Lexicographically smallest monic irreducible polynomial of degree r over
// GF(p). Candidates are enumerated by the integer whose base-p digits are the
// non-leading coefficients (constant term least significant) and tested by
// trial division against every monic polynomial of degree 1..r/2.
Polynomial find_irreducible(std::uint32_t p, std::uint32_t r);

/// Finite field GF(p^r) with dense addition and multiplication tables.
///
/// Element code e stands for the polynomial whose coefficient of x^t is the
/// t-th base-p digit of e. Tables are q*q, so the order is capped when the
/// field is built; the hard ceiling is 2^16 because codes are stored as
/// 16-bit values.
class GaloisField {
 public:
  static constexpr std::uint64_t kDefaultOrderCap = 4096;
  static constexpr std::uint64_t kMaxOrderCap = 65536;

  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return r_; }
  std::uint32_t order() const noexcept { return q_; }
  const Polynomial& irreducible() const noexcept { return irreducible_; }

  Element add(Element a, Element b) const { return add_[index(a, b)]; }
  Element mul(Element a, Element b) const { return mul_[index(a, b)]; }
  Element neg(Element a) const;
  Element sub(Element a, Element b) const { return add(a, neg(b)); }
  Element inv(Element a) const;

 private:
  friend GaloisField build_field(std::uint32_t p, std::uint32_t r, std::uint64_t cap);

  std::size_t index(Element a, Element b) const noexcept {
    return static_cast<std::size_t>(a) * q_ + b;
  }

  std::uint32_t p_ = 0;
  std::uint32_t r_ = 0;
  std::uint32_t q_ = 0;
  Polynomial irreducible_;
  std::vector<std::uint16_t> add_;
  std::vector<std::uint16_t> mul_;
  std::vector<std::uint16_t> neg_;
  std::vector<std::uint16_t> inv_;
};

GaloisField build_field(std::uint32_t p, std::uint32_t r,
                        std::uint64_t cap = GaloisField::kDefaultOrderCap);

// Throws DivisionByZero for e = 0.
Element field_inv(const GaloisField& field, Element e);

}  // namespace eulercs
