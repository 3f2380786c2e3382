#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/rational_poly.hpp"
#include "fraclab/report.hpp"

namespace fraclab {

// The eigenvalue variable t stands for -Delta, so every "-1/2 Delta" below is t/2.

/// q_0 ... q_k from the three-term recursion with q_{-2} = q_{-1} = 0, q_0 = 1.
std::vector<RationalPoly> q_via_recursion(int k, const mpq_class& m, const mpq_class& n);

/// q_ell from the binomial closed form.
RationalPoly q_via_closed_form(int k, int ell, const mpq_class& m, const mpq_class& n);

/// prod_{j=1..k} (t - (n-m+2k-4j+3)(m+n-2k+4j-3)/4)
RationalPoly factorization_polynomial(int k, const mpq_class& m, const mpq_class& n);

/// j-th factor of the product above.
RationalPoly factorization_factor(int k, int j, const mpq_class& m, const mpq_class& n);

struct AppendixFailure {
  std::string check;  // "recursion-vs-closed-form", "factorization", "substitution", ...
  int k = 0;
  int ell = 0;
  mpq_class m, n;
  std::string detail;
};

struct AppendixResult {
  int k_max = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  long long comparisons = 0;
  std::vector<std::pair<mpq_class, mpq_class>> samples;
  std::optional<AppendixFailure> failure;
  double runtime_seconds = 0.0;
};

/// Draws `trials` rationals (m, n) = (p/q, p'/q') with |p|, q <= 50 and checks, exactly,
/// (i) recursion == closed form for all ell <= k <= k_max, (ii) 2^k q_k == factorization,
/// (iii) the k = 1 factor at weight m - 2k + 4j - 2 is the j-th factor. Stops at the first
/// failing tuple.
AppendixResult verify_appendix_detail(int k_max, int trials, std::uint64_t seed = 0);

VerificationReport verify_appendix(int k_max, int trials, std::uint64_t seed = 0);

}  // namespace fraclab
