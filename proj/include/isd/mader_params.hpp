#ifndef ISD_MADER_PARAMS_HPP
#define ISD_MADER_PARAMS_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "isd/graph.hpp"

namespace isd {

/// Every constant of the robust-branching argument, kept exact where the
/// value is rational and in directed-rounded high precision elsewhere.
///
/// Derived profiles follow the formulas
///   a = s-1,  alpha = (s-2)/2 + eta/4,  gamma = alpha-1,
///   q = 10a^2+a+1,  Q = 9q^2,  L = 4*ell+1,  C = (L+1)(D+1),  p = 1/(C+1),
///   c0 = eta / (4(D-s+2) D^{2 ell}),
///   mu_ell = gamma alpha^{ell-3} / (e(C+1)),  pi = exp(-mu_ell/8),
///   D0 = ceil(max(2/(p c0), 2 D^{2 ell+1}, Q, D)),
///   girth_threshold = max(12 ell + 5, L(2m+2)).
/// Desk profiles may override any field; the feasibility flags then simply
/// record which paper inequalities the overridden values satisfy.
struct MaderParameters {
  int s = 0;
  mpq_class eta;
  mpz_class D;
  int a = 0;
  mpq_class alpha, gamma;
  long q = 0, Q = 0;
  int ell = 0;
  long L = 0;
  mpz_class C;
  mpq_class p;          // sampling probability
  mpq_class c0;
  mpq_class mu_scaled;  // gamma * alpha^{ell-3} / (C+1) = mu_ell * e, exact
  mpz_class D0;
  int m = 0;
  mpz_class girth_threshold;
};

struct FeasibilityReport {
  bool feasible = false;
  std::vector<std::string> violated;  // names of failed conditions
  double mu_ell_log10 = 0;            // magnitudes for reporting
  double pi_log10 = 0;                // log10 of pi = -mu/8 / ln 10
};

struct MaderDerivation {
  MaderParameters params;
  FeasibilityReport feasibility;
};

namespace detail {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec = 256) { mpfr_init2(x_, prec); }
  ~Mpfr() { mpfr_clear(x_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }

 private:
  mpfr_t x_;
};

// ln(v) for an exact rational v > 0, rounded in the requested direction
inline void log_of_mpq(mpfr_ptr out, const mpq_class& v, mpfr_rnd_t rnd) {
  Mpfr tmp;
  mpfr_set_q(tmp.get(), v.get_mpq_t(), rnd);
  mpfr_log(out, tmp.get(), rnd);
}

}  // namespace detail

/// Derive all constants from (s, eta, D, ell, m) and check the feasibility
/// inequalities of the robust-branching argument with conservative directed
/// rounding: "feasible" is only reported when it provably holds.
inline MaderDerivation derive_mader_parameters(int s, const mpq_class& eta, const mpz_class& D,
                                               int ell, int m) {
  if (s < 4) throw std::invalid_argument("mader parameters: s must be >= 4");
  if (eta <= 0) throw std::invalid_argument("mader parameters: eta must be positive");
  if (D < s - 1) throw std::invalid_argument("mader parameters: D must be >= s-1");
  if (ell < 3) throw std::invalid_argument("mader parameters: ell must be >= 3");
  if (m < 1) throw std::invalid_argument("mader parameters: m must be >= 1");

  MaderParameters P;
  P.s = s;
  P.eta = eta;
  P.eta.canonicalize();
  P.D = D;
  P.a = s - 1;
  P.alpha = mpq_class(s - 2, 2) + P.eta / 4;
  P.alpha.canonicalize();
  P.gamma = P.alpha - 1;
  P.q = 10L * P.a * P.a + P.a + 1;
  P.Q = 9L * P.q * P.q;
  P.ell = ell;
  P.L = 4L * ell + 1;
  P.C = mpz_class(P.L + 1) * (D + 1);
  P.p = mpq_class(1) / mpq_class(P.C + 1);
  P.m = m;

  mpz_class D_2ell, D_2ell1, D_12ell5;
  mpz_pow_ui(D_2ell.get_mpz_t(), D.get_mpz_t(), 2 * static_cast<unsigned long>(ell));
  mpz_pow_ui(D_2ell1.get_mpz_t(), D.get_mpz_t(), 2 * static_cast<unsigned long>(ell) + 1);
  mpz_pow_ui(D_12ell5.get_mpz_t(), D.get_mpz_t(), 12 * static_cast<unsigned long>(ell) + 5);

  P.c0 = P.eta / (mpq_class(4) * mpq_class(D - (s - 2)) * mpq_class(D_2ell));
  P.c0.canonicalize();

  // mu_scaled = gamma * alpha^{ell-3} / (C+1): exact rational
  mpq_class alpha_pow;
  mpz_class num_pow, den_pow;
  mpz_pow_ui(num_pow.get_mpz_t(), P.alpha.get_num().get_mpz_t(), static_cast<unsigned long>(ell - 3));
  mpz_pow_ui(den_pow.get_mpz_t(), P.alpha.get_den().get_mpz_t(), static_cast<unsigned long>(ell - 3));
  alpha_pow = mpq_class(num_pow) / mpq_class(den_pow);
  P.mu_scaled = P.gamma * alpha_pow / mpq_class(P.C + 1);
  P.mu_scaled.canonicalize();

  // D0 = ceil(max(2/(p c0), 2 D^{2 ell+1}, Q, D))
  mpq_class two_over_pc0 = mpq_class(2) / (P.p * P.c0);
  two_over_pc0.canonicalize();
  mpz_class ceil_pc0;
  mpz_cdiv_q(ceil_pc0.get_mpz_t(), two_over_pc0.get_num().get_mpz_t(), two_over_pc0.get_den().get_mpz_t());
  P.D0 = ceil_pc0;
  if (2 * D_2ell1 > P.D0) P.D0 = 2 * D_2ell1;
  if (mpz_class(P.Q) > P.D0) P.D0 = P.Q;
  if (D > P.D0) P.D0 = D;

  P.girth_threshold = std::max(mpz_class(12L * ell + 5), mpz_class(mpz_class(P.L) * (2L * m + 2)));

  // Feasibility, conservatively:
  //   (A) mu_ell >= 18 Q          <=>  mu_scaled >= 18 Q e
  //   (B) pi <= 1/(e(4 D^{12l+5}+1))  <=>  mu_ell/8 >= 1 + ln(4 D^{12l+5}+1)
  //   (C) 2 e D pi < p c0 / 8     <=>  mu_ell/8 > 1 + ln(16 D/(p c0))
  //   (D) 2 (q^2-1)^m >= 11 q^2 D0^2
  FeasibilityReport rep;
  constexpr mpfr_prec_t kPrec = 320;

  detail::Mpfr e_lo(kPrec), e_hi(kPrec);
  mpfr_set_ui(e_lo.get(), 1, MPFR_RNDD);
  mpfr_exp(e_lo.get(), e_lo.get(), MPFR_RNDD);
  mpfr_set_ui(e_hi.get(), 1, MPFR_RNDU);
  mpfr_exp(e_hi.get(), e_hi.get(), MPFR_RNDU);

  // mu_ell bounds: mu_scaled / e
  detail::Mpfr mu_lo(kPrec), mu_hi(kPrec), tmp(kPrec);
  mpfr_set_q(mu_lo.get(), P.mu_scaled.get_mpq_t(), MPFR_RNDD);
  mpfr_div(mu_lo.get(), mu_lo.get(), e_hi.get(), MPFR_RNDD);
  mpfr_set_q(mu_hi.get(), P.mu_scaled.get_mpq_t(), MPFR_RNDU);
  mpfr_div(mu_hi.get(), mu_hi.get(), e_lo.get(), MPFR_RNDU);

  rep.mu_ell_log10 = mpfr_get_d(mu_lo.get(), MPFR_RNDN) > 0
                         ? std::log10(mpfr_get_d(mu_lo.get(), MPFR_RNDN))
                         : 0.0;

  // (A)
  {
    detail::Mpfr lhs(kPrec), rhs(kPrec);
    mpfr_set_q(lhs.get(), P.mu_scaled.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_si(rhs.get(), e_hi.get(), 18L * P.Q, MPFR_RNDU);
    if (!(mpfr_cmp(lhs.get(), rhs.get()) >= 0)) rep.violated.push_back("mu_ell >= 18Q");
  }
  // (B)
  {
    detail::Mpfr rhs(kPrec);
    mpq_class big = mpq_class(4) * mpq_class(D_12ell5) + 1;
    detail::log_of_mpq(rhs.get(), big, MPFR_RNDU);
    mpfr_add_ui(rhs.get(), rhs.get(), 1, MPFR_RNDU);
    mpfr_div_ui(tmp.get(), mu_lo.get(), 8, MPFR_RNDD);
    if (!(mpfr_cmp(tmp.get(), rhs.get()) >= 0))
      rep.violated.push_back("pi <= 1/(e(4D^{12ell+5}+1))");
  }
  // (C)
  {
    detail::Mpfr rhs(kPrec);
    mpq_class ratio = mpq_class(16) * mpq_class(D) / (P.p * P.c0);
    ratio.canonicalize();
    detail::log_of_mpq(rhs.get(), ratio, MPFR_RNDU);
    mpfr_add_ui(rhs.get(), rhs.get(), 1, MPFR_RNDU);
    mpfr_div_ui(tmp.get(), mu_lo.get(), 8, MPFR_RNDD);
    if (!(mpfr_cmp(tmp.get(), rhs.get()) > 0)) rep.violated.push_back("2eD pi < p c0 / 8");
  }
  // (D)
  {
    mpz_class lhs, base = mpz_class(P.q) * P.q - 1;
    mpz_pow_ui(lhs.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(m));
    lhs *= 2;
    mpz_class rhs = mpz_class(11) * P.q * P.q * P.D0 * P.D0;
    if (!(lhs >= rhs)) rep.violated.push_back("2(q^2-1)^m >= 11 q^2 D0^2");
  }

  {
    detail::Mpfr pl(kPrec);
    mpfr_div_ui(pl.get(), mu_hi.get(), 8, MPFR_RNDU);
    rep.pi_log10 = -mpfr_get_d(pl.get(), MPFR_RNDN) / std::log(10.0);
  }
  rep.feasible = rep.violated.empty();
  return {std::move(P), std::move(rep)};
}

/// The three published parameter tuples: (ell, m) by minimum degree d.
inline std::pair<int, int> published_ell_m(int d) {
  if (d <= 4) return {205, 4814};
  if (d == 5) return {136, 3423};
  return {113, 5000};
}

/// Paper-faithful parameters for finding K_{d+1} in bounded-degree hosts:
/// s = d+1, eta = 1/20, D = d^43, (ell, m) from the published table.
inline MaderDerivation paper_mader_parameters(int d) {
  if (d < 4) throw std::invalid_argument("paper_mader_parameters: d must be >= 4");
  mpz_class D;
  mpz_ui_pow_ui(D.get_mpz_t(), static_cast<unsigned long>(d), 43);
  auto [ell, m] = published_ell_m(d);
  return derive_mader_parameters(d + 1, mpq_class(1, 20), D, ell, m);
}

}  // namespace isd

#endif  // ISD_MADER_PARAMS_HPP
