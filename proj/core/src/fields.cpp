#include "eulercs/fields.hpp"

#include <string>

#include "eulercs/error.hpp"

namespace eulercs {

namespace {

// Drops leading zero coefficients; the zero polynomial becomes empty.
void trim(Polynomial& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  // p is prime, so a^(p-2) is the inverse.
  std::uint64_t result = 1;
  std::uint64_t base = a % p;
  std::uint32_t e = p - 2;
  while (e > 0) {
    if (e & 1U) result = result * base % p;
    base = base * base % p;
    e >>= 1U;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo b over GF(p); b must be non-zero after trimming.
Polynomial poly_mod(Polynomial a, Polynomial b, std::uint32_t p) {
  trim(a);
  trim(b);
  const std::size_t db = b.size() - 1;
  const std::uint64_t lead_inv = inverse_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const std::uint64_t factor = a.back() * lead_inv % p;
    for (std::size_t t = 0; t <= db; ++t) {
      const std::uint64_t sub = factor * b[t] % p;
      a[t + shift] = static_cast<std::uint32_t>((a[t + shift] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Polynomial monic_from_code(std::uint64_t code, std::uint32_t p, std::uint32_t degree) {
  Polynomial poly(degree + 1, 0);
  for (std::uint32_t t = 0; t < degree; ++t) {
    poly[t] = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  poly[degree] = 1;
  return poly;
}

std::uint64_t ipow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t out = 1;
  for (std::uint32_t i = 0; i < exp; ++i) out *= base;
  return out;
}

bool is_irreducible(const Polynomial& f, std::uint32_t p) {
  const std::uint32_t r = static_cast<std::uint32_t>(f.size() - 1);
  for (std::uint32_t d = 1; d <= r / 2; ++d) {
    const std::uint64_t count = ipow(p, d);
    for (std::uint64_t code = 0; code < count; ++code) {
      if (poly_mod(f, monic_from_code(code, p, d), p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

bool is_prime(std::uint64_t value) noexcept {
  if (value < 2) return false;
  if (value % 2 == 0) return value == 2;
  for (std::uint64_t d = 3; d * d <= value; d += 2) {
    if (value % d == 0) return false;
  }
  return true;
}

Polynomial find_irreducible(std::uint32_t p, std::uint32_t r) {
  if (!is_prime(p)) throw Error(Errc::InvalidPrime, std::to_string(p) + " is not prime");
  if (r < 1) throw Error(Errc::InvalidInput, "extension degree must be >= 1");
  const std::uint64_t count = ipow(p, r);
  for (std::uint64_t code = 0; code < count; ++code) {
    Polynomial candidate = monic_from_code(code, p, r);
    if (is_irreducible(candidate, p)) return candidate;
  }
  // Irreducible polynomials exist for every degree; unreachable for prime p.
  throw Error(Errc::InvalidInput, "no irreducible polynomial found");
}

GaloisField build_field(std::uint32_t p, std::uint32_t r, std::uint64_t cap) {
  if (!is_prime(p)) throw Error(Errc::InvalidPrime, std::to_string(p) + " is not prime");
  if (r < 1) throw Error(Errc::InvalidInput, "extension degree must be >= 1");
  if (cap > GaloisField::kMaxOrderCap) cap = GaloisField::kMaxOrderCap;
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < r; ++i) {
    q *= p;
    if (q > cap) {
      throw Error(Errc::FieldTooLarge, "GF(" + std::to_string(p) + "^" + std::to_string(r) +
                                           ") exceeds order cap " + std::to_string(cap));
    }
  }

  GaloisField field;
  field.p_ = p;
  field.r_ = r;
  field.q_ = static_cast<std::uint32_t>(q);
  field.irreducible_ = find_irreducible(p, r);

  const std::size_t n = field.q_;
  std::vector<std::uint32_t> pow_p(r);
  for (std::uint32_t t = 0; t < r; ++t) pow_p[t] = static_cast<std::uint32_t>(ipow(p, t));

  auto digits_of = [&](std::uint32_t code) {
    std::vector<std::uint32_t> d(r);
    for (std::uint32_t t = 0; t < r; ++t) {
      d[t] = code % p;
      code /= p;
    }
    return d;
  };
  auto code_of = [&](const std::vector<std::uint32_t>& d) {
    std::uint32_t code = 0;
    for (std::uint32_t t = r; t-- > 0;) code = code * p + d[t];
    return code;
  };

  field.add_.assign(n * n, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    const auto da = digits_of(a);
    for (std::uint32_t b = 0; b < n; ++b) {
      auto db = digits_of(b);
      for (std::uint32_t t = 0; t < r; ++t) db[t] = (da[t] + db[t]) % p;
      field.add_[field.index(a, b)] = static_cast<std::uint16_t>(code_of(db));
    }
  }

  // Row a of the product table: a * (rest + d*x^t) = a*rest + d*(a*x^t),
  // where t is the top non-zero digit of b and rest < b.
  field.mul_.assign(n * n, 0);
  const Polynomial& modulus = field.irreducible_;
  std::vector<std::uint32_t> scaled(static_cast<std::size_t>(r) * p);
  for (std::uint32_t a = 0; a < n; ++a) {
    Polynomial shifted = digits_of(a);
    for (std::uint32_t t = 0; t < r; ++t) {
      Polynomial reduced = poly_mod(shifted, modulus, p);
      reduced.resize(r, 0);
      for (std::uint32_t d = 0; d < p; ++d) {
        std::vector<std::uint32_t> v(r);
        for (std::uint32_t s = 0; s < r; ++s) {
          v[s] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(reduced[s]) * d % p);
        }
        scaled[static_cast<std::size_t>(t) * p + d] = code_of(v);
      }
      shifted.insert(shifted.begin(), 0);
    }
    for (std::uint32_t b = 1; b < n; ++b) {
      std::uint32_t t = r - 1;
      while (b / pow_p[t] == 0) --t;
      const std::uint32_t d = (b / pow_p[t]) % p;
      const std::uint32_t rest = b - d * pow_p[t];
      const std::uint32_t lhs = field.mul_[field.index(a, rest)];
      field.mul_[field.index(a, b)] =
          field.add_[field.index(lhs, scaled[static_cast<std::size_t>(t) * p + d])];
    }
  }

  field.neg_.assign(n, 0);
  field.inv_.assign(n, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) {
      if (field.add_[field.index(a, b)] == 0) field.neg_[a] = static_cast<std::uint16_t>(b);
      if (a != 0 && field.mul_[field.index(a, b)] == 1) field.inv_[a] = static_cast<std::uint16_t>(b);
    }
  }
  return field;
}

Element GaloisField::neg(Element a) const { return neg_.at(a); }

Element GaloisField::inv(Element a) const {
  if (a == 0) throw Error(Errc::DivisionByZero, "zero has no multiplicative inverse");
  return inv_.at(a);
}

Element field_inv(const GaloisField& field, Element e) { return field.inv(e); }

}  // namespace eulercs
