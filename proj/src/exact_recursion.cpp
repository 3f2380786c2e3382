#include "fraclab/exact_recursion.hpp"

#include <chrono>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fraclab/special_functions.hpp"

namespace fraclab {

namespace {

mpq_class q(long num, long den = 1) {
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

// t/2 + c
RationalPoly half_t_plus(const mpq_class& c) { return RationalPoly::linear(c, q(1, 2)); }

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace

std::vector<RationalPoly> q_via_recursion(int k, const mpq_class& m, const mpq_class& n) {
  if (k < 1) throw std::invalid_argument("q_via_recursion: need k >= 1");
  std::vector<RationalPoly> qs;
  qs.reserve(k + 1);
  qs.emplace_back(1);
  const RationalPoly zero;
  auto at = [&](int i) -> const RationalPoly& { return i < 0 ? zero : qs[i]; };
  for (int l = 0; l < k; ++l) {
    const mpq_class lk = mpq_class(l * (k - l), 1);
    const mpq_class c1 = lk / 2 - (n + 1 - m) * (m + n + 1 - 2 * k + 4 * l) / 8;
    RationalPoly next = half_t_plus(c1) * at(l);
    if (l >= 1) {
      const mpq_class c2 = q((l - 1) * (k - l + 1), 2) - m * (m + n + 1 - 2 * k + 4 * l - 4) / 4;
      next += (lk / 2) * (half_t_plus(c2) * at(l - 1));
    }
    if (l >= 2) {
      // (l-1)_2 (k-l)_2 / 4
      const mpq_class outer = q((l - 1) * l * (k - l) * (k - l + 1), 4);
      const mpq_class inner = q(-(l - 2) * (k - l + 2), 2) +
                              (m + n + 1) * (m + n + 1 - 2 * k + 4 * l - 8) / 8;
      next += (outer * inner) * at(l - 2);
    }
    qs.push_back(std::move(next));
  }
  return qs;
}

RationalPoly q_via_closed_form(int k, int ell, const mpq_class& m, const mpq_class& n) {
  if (ell < 0 || ell > k) throw std::invalid_argument("q_via_closed_form: need 0 <= ell <= k");
  RationalPoly total;
  RationalPoly product(1);  // prod_{i=1..j}, built up as j grows
  for (int j = 0; j <= ell; ++j) {
    if (j >= 1) {
      const mpq_class x = (n - m + 2 * k - 4 * j + 3) * (m + n - 2 * k + 4 * j - 3) / 8;
      product *= half_t_plus(-x);
    }
    const unsigned rest = static_cast<unsigned>(ell - j);
    mpq_class coef = mpq_class(binomial(ell, j));
    // 2^{j - ell}
    mpz_class pow2 = 1;
    pow2 <<= rest;
    coef /= pow2;
    coef *= pochhammer(mpq_class(k - ell), rest);
    coef *= pochhammer((m + n + 1 - 2 * k + 4 * j) / 2, rest);
    coef.canonicalize();
    if (sgn(coef) != 0) total += coef * product;
  }
  return total;
}

RationalPoly factorization_factor(int k, int j, const mpq_class& m, const mpq_class& n) {
  const mpq_class x = (n - m + 2 * k - 4 * j + 3) * (m + n - 2 * k + 4 * j - 3) / 4;
  return RationalPoly::linear(-x, 1);
}

RationalPoly factorization_polynomial(int k, const mpq_class& m, const mpq_class& n) {
  if (k < 1) throw std::invalid_argument("factorization_polynomial: need k >= 1");
  RationalPoly p(1);
  for (int j = 1; j <= k; ++j) p *= factorization_factor(k, j, m, n);
  return p;
}

AppendixResult verify_appendix_detail(int k_max, int trials, std::uint64_t seed) {
  if (k_max < 1 || k_max > 10) throw std::invalid_argument("verify_appendix: need 1 <= k_max <= 10");
  if (trials < 1) throw std::invalid_argument("verify_appendix: need trials >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  AppendixResult res;
  res.k_max = k_max;
  res.trials = trials;
  res.seed = seed;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 50);
  auto draw = [&] { return q(num(rng), den(rng)); };
  while (static_cast<int>(res.samples.size()) < trials) {
    mpq_class m = draw(), n = draw();
    if (sgn(mpq_class(m + n + 1)) == 0) continue;
    res.samples.emplace_back(m, n);
  }

  auto fail = [&](std::string check, int k, int ell, const mpq_class& m, const mpq_class& n,
                  std::string detail) {
    res.failure = AppendixFailure{std::move(check), k, ell, m, n, std::move(detail)};
  };

  for (const auto& [m, n] : res.samples) {
    for (int k = 1; k <= k_max && !res.failure; ++k) {
      const auto rec = q_via_recursion(k, m, n);
      for (int ell = 0; ell <= k; ++ell) {
        ++res.comparisons;
        const RationalPoly closed = q_via_closed_form(k, ell, m, n);
        if (!(rec[ell] == closed)) {
          fail("recursion-vs-closed-form", k, ell, m, n,
               "recursion " + rec[ell].to_string() + " vs closed " + closed.to_string());
          break;
        }
        ++res.comparisons;
        mpz_class lead_den = 1;
        lead_den <<= static_cast<unsigned>(ell);
        if (rec[ell].degree() != ell || rec[ell].leading() != mpq_class(1, 1) / lead_den) {
          fail("degree-and-leading", k, ell, m, n, "q_ell = " + rec[ell].to_string());
          break;
        }
      }
      if (res.failure) break;

      ++res.comparisons;
      mpz_class two_k = 1;
      two_k <<= static_cast<unsigned>(k);
      const RationalPoly scaled = rec[k] * mpq_class(two_k);
      const RationalPoly prod = factorization_polynomial(k, m, n);
      if (!(scaled == prod)) {
        fail("factorization", k, k, m, n, "2^k q_k " + scaled.to_string() + " vs " + prod.to_string());
        break;
      }

      RationalPoly composed(1);
      for (int j = 1; j <= k; ++j) {
        ++res.comparisons;
        const mpq_class shifted = m - 2 * k + 4 * j - 2;
        const RationalPoly second_order = factorization_factor(1, 1, shifted, n);
        if (!(second_order == factorization_factor(k, j, m, n))) {
          fail("substitution", k, j, m, n, "k=1 factor at m' = " + shifted.get_str());
          break;
        }
        composed *= second_order;
      }
      if (res.failure) break;
      ++res.comparisons;
      if (!(composed == prod)) {
        fail("composition", k, k, m, n, "product of shifted second-order factors differs");
        break;
      }
    }
    if (res.failure) break;
  }
  res.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

VerificationReport verify_appendix(int k_max, int trials, std::uint64_t seed) {
  const AppendixResult res = verify_appendix_detail(k_max, trials, seed);
  const double mismatches = res.failure ? 1.0 : 0.0;
  VerificationReport r = make_report_with_error(
      "appendix.recursion-closed-form-factorization",
      "q recursion = closed form, 2^k q_k = product of shifted second-order factors",
      static_cast<double>(res.comparisons), static_cast<double>(res.comparisons), mismatches, 0.0,
      "mismatches");
  r.runtime_seconds = res.runtime_seconds;
  std::ostringstream os;
  if (res.failure) {
    const auto& f = *res.failure;
    os << "first failure: check=" << f.check << " k=" << f.k << " ell=" << f.ell
       << " m=" << f.m.get_str() << " n=" << f.n.get_str() << " (" << f.detail << ")";
  } else {
    os << res.comparisons << " exact comparisons, k <= " << res.k_max << ", " << res.trials
       << " random (m, n)";
  }
  r.detail = os.str();
  return r;
}

}  // namespace fraclab
