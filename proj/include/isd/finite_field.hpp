#ifndef ISD_FINITE_FIELD_HPP
#define ISD_FINITE_FIELD_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isd {

/// GF(p^k) for prime powers q <= 64, with full add/mul/inv tables.
/// Elements are integers 0..q-1 read as base-p digit vectors (polynomial
/// coefficients, least significant digit = constant term).
class FiniteField {
 public:
  explicit FiniteField(int q) : q_(q) {
    auto pk = prime_power(q);
    if (!pk) throw std::invalid_argument("FiniteField: " + std::to_string(q) + " is not a prime power <= 64");
    p_ = pk->first;
    k_ = pk->second;
    modulus_ = irreducible_modulus(p_, k_);
    build_tables();
    verify_axioms();
  }

  int q() const { return q_; }
  int characteristic() const { return p_; }
  int degree() const { return k_; }
  const std::vector<int>& modulus() const { return modulus_; }

  int add(int a, int b) const { return add_[idx(a, b)]; }
  int mul(int a, int b) const { return mul_[idx(a, b)]; }
  int neg(int a) const { return neg_[static_cast<std::size_t>(a)]; }
  int inv(int a) const {
    if (a == 0) throw std::domain_error("FiniteField: zero has no inverse");
    return inv_[static_cast<std::size_t>(a)];
  }
  int sub(int a, int b) const { return add(a, neg(b)); }

  static std::optional<std::pair<int, int>> prime_power(int q) {
    if (q < 2) return std::nullopt;
    int p = smallest_prime_factor(q);
    int k = 0, rest = q;
    while (rest % p == 0) {
      rest /= p;
      ++k;
    }
    if (rest != 1) return std::nullopt;
    return std::make_pair(p, k);
  }

 private:
  static int smallest_prime_factor(int q) {
    for (int d = 2; d * d <= q; ++d)
      if (q % d == 0) return d;
    return q;
  }

  // fixed table of irreducible moduli for p^k <= 64 (k >= 2); embedded, not
  // computed, so element encodings are stable across runs
  static std::vector<int> irreducible_modulus(int p, int k) {
    if (k == 1) return {};  // prime field, plain mod p
    struct Entry { int p, k; std::vector<int> coeffs; };  // ascending degree, monic
    static const std::vector<Entry> table = {
        {2, 2, {1, 1, 1}},           // x^2+x+1
        {2, 3, {1, 1, 0, 1}},        // x^3+x+1
        {2, 4, {1, 1, 0, 0, 1}},     // x^4+x+1
        {2, 5, {1, 0, 1, 0, 0, 1}},  // x^5+x^2+1
        {2, 6, {1, 1, 0, 0, 0, 0, 1}},  // x^6+x+1
        {3, 2, {1, 0, 1}},           // x^2+1
        {3, 3, {1, 2, 0, 1}},        // x^3+2x+1
        {5, 2, {1, 1, 1}},           // x^2+x+1
        {7, 2, {3, 1, 1}},           // x^2+x+3
    };
    for (const auto& e : table)
      if (e.p == p && e.k == k) return e.coeffs;
    throw std::invalid_argument("FiniteField: no modulus for p=" + std::to_string(p) +
                                " k=" + std::to_string(k));
  }

  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(q_) + static_cast<std::size_t>(b);
  }

  std::vector<int> digits(int a) const {
    std::vector<int> d(static_cast<std::size_t>(k_));
    for (int i = 0; i < k_; ++i) {
      d[static_cast<std::size_t>(i)] = a % p_;
      a /= p_;
    }
    return d;
  }

  int undigits(const std::vector<int>& d) const {
    int a = 0;
    for (int i = k_ - 1; i >= 0; --i) a = a * p_ + d[static_cast<std::size_t>(i)];
    return a;
  }

  void build_tables() {
    add_.resize(static_cast<std::size_t>(q_) * q_);
    mul_.resize(static_cast<std::size_t>(q_) * q_);
    neg_.resize(static_cast<std::size_t>(q_));
    inv_.assign(static_cast<std::size_t>(q_), 0);
    for (int a = 0; a < q_; ++a) {
      auto da = digits(a);
      for (int i = 0; i < k_; ++i) da[static_cast<std::size_t>(i)] = (p_ - da[static_cast<std::size_t>(i)]) % p_;
      neg_[static_cast<std::size_t>(a)] = undigits(da);
    }
    for (int a = 0; a < q_; ++a) {
      auto da = digits(a);
      for (int b = 0; b < q_; ++b) {
        auto db = digits(b);
        std::vector<int> sum(static_cast<std::size_t>(k_));
        for (int i = 0; i < k_; ++i)
          sum[static_cast<std::size_t>(i)] = (da[static_cast<std::size_t>(i)] + db[static_cast<std::size_t>(i)]) % p_;
        add_[idx(a, b)] = undigits(sum);
        // polynomial product reduced by the modulus
        std::vector<int> prod(static_cast<std::size_t>(2 * k_ - 1), 0);
        for (int i = 0; i < k_; ++i)
          for (int j = 0; j < k_; ++j)
            prod[static_cast<std::size_t>(i + j)] =
                (prod[static_cast<std::size_t>(i + j)] + da[static_cast<std::size_t>(i)] * db[static_cast<std::size_t>(j)]) % p_;
        for (int deg = 2 * k_ - 2; deg >= k_; --deg) {
          int coef = prod[static_cast<std::size_t>(deg)];
          if (coef == 0) continue;
          prod[static_cast<std::size_t>(deg)] = 0;
          // x^deg = x^{deg-k} * (-(modulus minus leading term))
          for (int i = 0; i < k_; ++i) {
            int sub = (coef * modulus_[static_cast<std::size_t>(i)]) % p_;
            auto& slot = prod[static_cast<std::size_t>(deg - k_ + i)];
            slot = ((slot - sub) % p_ + p_) % p_;
          }
        }
        std::vector<int> red(prod.begin(), prod.begin() + k_);
        mul_[idx(a, b)] = undigits(red);
      }
    }
    for (int a = 1; a < q_; ++a)
      for (int b = 1; b < q_; ++b)
        if (mul_[idx(a, b)] == 1) {
          inv_[static_cast<std::size_t>(a)] = b;
          break;
        }
  }

  void verify_axioms() const {
    // inverses total
    for (int a = 1; a < q_; ++a) {
      if (inv_[static_cast<std::size_t>(a)] == 0 || mul_[idx(a, inv_[static_cast<std::size_t>(a)])] != 1)
        throw std::logic_error("FiniteField: missing multiplicative inverse");
      if (add_[idx(a, neg_[static_cast<std::size_t>(a)])] != 0)
        throw std::logic_error("FiniteField: missing additive inverse");
    }
    // commutativity and identities, all pairs
    for (int a = 0; a < q_; ++a) {
      if (add_[idx(a, 0)] != a || mul_[idx(a, 1)] != a || mul_[idx(a, 0)] != 0)
        throw std::logic_error("FiniteField: identity axiom failed");
      for (int b = 0; b < q_; ++b) {
        if (add_[idx(a, b)] != add_[idx(b, a)] || mul_[idx(a, b)] != mul_[idx(b, a)])
          throw std::logic_error("FiniteField: commutativity failed");
      }
    }
    // associativity and distributivity, exhaustive (q <= 64 keeps this cheap)
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b < q_; ++b)
        for (int c = 0; c < q_; ++c) {
          if (add_[idx(add_[idx(a, b)], c)] != add_[idx(a, add_[idx(b, c)])])
            throw std::logic_error("FiniteField: additive associativity failed");
          if (mul_[idx(mul_[idx(a, b)], c)] != mul_[idx(a, mul_[idx(b, c)])])
            throw std::logic_error("FiniteField: multiplicative associativity failed");
          if (mul_[idx(a, add_[idx(b, c)])] != add_[idx(mul_[idx(a, b)], mul_[idx(a, c)])])
            throw std::logic_error("FiniteField: distributivity failed");
        }
  }

  int q_, p_, k_;
  std::vector<int> modulus_;
  std::vector<int> add_, mul_, neg_, inv_;
};

}  // namespace isd

#endif  // ISD_FINITE_FIELD_HPP
