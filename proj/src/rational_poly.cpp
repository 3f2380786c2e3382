#include "fraclab/rational_poly.hpp"

#include <algorithm>
#include <sstream>

namespace fraclab {

RationalPoly::RationalPoly(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  canonicalize();
}

RationalPoly::RationalPoly(const mpq_class& constant) : coeffs_{constant} {
  coeffs_[0].canonicalize();
  canonicalize();
}

RationalPoly RationalPoly::t() { return RationalPoly({mpq_class(0), mpq_class(1)}); }

RationalPoly RationalPoly::linear(const mpq_class& c0, const mpq_class& c1) {
  return RationalPoly({c0, c1});
}

void RationalPoly::canonicalize() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

mpq_class RationalPoly::leading() const { return coeffs_.empty() ? mpq_class(0) : coeffs_.back(); }

mpq_class RationalPoly::coefficient(std::size_t power) const {
  return power < coeffs_.size() ? coeffs_[power] : mpq_class(0);
}

mpq_class RationalPoly::evaluate(const mpq_class& t) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::string RationalPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (sgn(coeffs_[i]) == 0) continue;
    if (!first) os << " + ";
    os << "(" << coeffs_[i].get_str() << ")";
    if (i == 1) os << "*t";
    if (i > 1) os << "*t^" << i;
    first = false;
  }
  return os.str();
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), mpq_class(0));
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  canonicalize();
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), mpq_class(0));
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  canonicalize();
  return *this;
}

RationalPoly& RationalPoly::operator*=(const RationalPoly& other) {
  if (is_zero() || other.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<mpq_class> out(coeffs_.size() + other.coeffs_.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * other.coeffs_[j];
  coeffs_ = std::move(out);
  canonicalize();
  return *this;
}

RationalPoly& RationalPoly::operator*=(const mpq_class& scalar) {
  for (auto& c : coeffs_) c *= scalar;
  canonicalize();
  return *this;
}

}  // namespace fraclab
