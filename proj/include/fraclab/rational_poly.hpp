#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace fraclab {

/// Dense univariate polynomial with exact rational coefficients; coeffs()[i] multiplies t^i.
/// Always kept in canonical form (no trailing zero coefficients; the zero polynomial is empty).
class RationalPoly {
public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<mpq_class> coeffs);
  RationalPoly(const mpq_class& constant);  // NOLINT(google-explicit-constructor)
  RationalPoly(int constant) : RationalPoly(mpq_class(constant)) {}  // NOLINT

  /// The monomial t.
  static RationalPoly t();
  /// c0 + c1 t
  static RationalPoly linear(const mpq_class& c0, const mpq_class& c1);

  [[nodiscard]] const std::vector<mpq_class>& coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] mpq_class leading() const;
  [[nodiscard]] mpq_class coefficient(std::size_t power) const;
  [[nodiscard]] mpq_class evaluate(const mpq_class& t) const;
  [[nodiscard]] std::string to_string() const;

  RationalPoly& operator+=(const RationalPoly& other);
  RationalPoly& operator-=(const RationalPoly& other);
  RationalPoly& operator*=(const RationalPoly& other);
  RationalPoly& operator*=(const mpq_class& scalar);

  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const RationalPoly& b) { return a *= b; }
  friend RationalPoly operator*(RationalPoly a, const mpq_class& s) { return a *= s; }
  friend RationalPoly operator*(const mpq_class& s, RationalPoly a) { return a *= s; }
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }

private:
  void canonicalize();
  std::vector<mpq_class> coeffs_;
};

}  // namespace fraclab
