#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "thermoait/bitstring.hpp"
#include "thermoait/oracle.hpp"
#include "thermoait/thermo.hpp"

namespace thermoait {

/// The increasing functions of temperature the searches work with.
enum class HandleQuantity { Z, negF, E, S };
std::string_view handle_quantity_name(HandleQuantity q);
/// Accepts Z, -F (or negF), E, S.
HandleQuantity parse_handle_quantity(std::string_view text);

/// Constants for g(x,k) (the prefix value) at temperature T, valid for
/// k >= k0 and T <= x <= t:
///   2^-a_lower (x-T) <= g(x,k) - g(T,k) <= 2^a (x-T)
///   ℓ^c 2^(-ℓ/T - b) <= g(T,k+1) - g(T,k) <= ℓ^b_upper 2^(-ℓ/T + c_upper)
/// where ℓ = |p_{k+1}|.
struct ConditionCertificate {
  unsigned a = 0;
  unsigned a_lower = 0;
  unsigned b = 0;
  unsigned c = 0;
  unsigned b_upper = 0;
  unsigned c_upper = 0;
  mpz_class k0 = 1;
  Temperature t{3, 4};
};

/// Prefix values g(x, k) for one fixed x, reusing one weight table.
class PrefixValues {
 public:
  PrefixValues(const EnsembleSnapshot& snapshot, HandleQuantity q, const Temperature& x, unsigned precision,
               std::optional<std::uint32_t> through_length = std::nullopt);
  Enclosure at(const mpz_class& k) const;
  const Temperature& temperature() const noexcept { return table_.temperature(); }

 private:
  HandleQuantity q_;
  MomentTable table_;
  Enclosure lead_;  // 2^-ℓ1/x
};

/// f(x): the k -> infinity limit, from a closed form where the ensemble has
/// one and eval_limit otherwise. 0 < x < 1.
Enclosure limit_value(const EnsembleSnapshot& snapshot, HandleQuantity q, const Temperature& x,
                      unsigned precision = kDefaultPrecision);

class QuantityHandle {
 public:
  QuantityHandle(std::shared_ptr<const EnsembleSnapshot> snapshot, HandleQuantity q, Temperature T,
                 ConditionCertificate certificate, unsigned precision);

  const EnsembleSnapshot& snapshot() const noexcept { return *snapshot_; }
  std::shared_ptr<const EnsembleSnapshot> snapshot_ptr() const noexcept { return snapshot_; }
  HandleQuantity quantity() const noexcept { return q_; }
  const Temperature& T() const noexcept { return T_; }
  const ConditionCertificate& certificate() const noexcept { return cert_; }
  unsigned precision() const noexcept { return precision_; }

  Enclosure g(const Temperature& x, const mpz_class& k, std::optional<unsigned> precision = std::nullopt) const;
  Enclosure f(std::optional<unsigned> precision = std::nullopt) const;

 private:
  std::shared_ptr<const EnsembleSnapshot> snapshot_;
  HandleQuantity q_;
  Temperature T_;
  ConditionCertificate cert_;
  unsigned precision_;
};

/// Computes the certificate at 0 < T < 1 with t = (T+1)/2, then re-checks the
/// increment bounds on every census increment past k0 and the slope bounds on
/// sampled (x, k). Throws CertificationError when a bound is contradicted.
QuantityHandle certify(std::shared_ptr<const EnsembleSnapshot> snapshot, HandleQuantity q, const Temperature& T,
                       unsigned precision = kDefaultPrecision);

struct SolveOptions {
  Rational bracket_lo{1, 64};
  Rational bracket_hi{63, 64};
  unsigned precision = kDefaultPrecision;
  /// Doublings of the precision tried before a comparison counts as unresolved.
  unsigned max_escalations = 3;
};

/// Bisection for f(T) = target on the bracket. The result has width <= tol and
/// contains every T in the bracket with f(T) in target. Throws RangeError when
/// the target lies outside f over the bracket.
Enclosure solve_temperature(const EnsembleSnapshot& snapshot, HandleQuantity q, const Enclosure& target,
                            const Dyadic& tol, const SolveOptions& options = {});

struct WitnessReport {
  Temperature T{1, 2};
  unsigned n = 0;
  mpz_class k_e;
  std::size_t m_e = 0;
  Dyadic length_threshold;
  BitString witness;
  mpz_class verified_through;
};

/// Given the first n bits of T, finds k_e >= k0 and m_e with
/// h(m_e) < g(0.T_n + 2^-n, k_e), where h is the upper oracle. Every program
/// past k_e then satisfies |p| - c·0.T_n·log2|p| > length_threshold, which is
/// re-checked through min(verify_factor·k_e, census total). The witness is the
/// shortlex-least string no program p_1..p_{k_e} outputs.
WitnessReport witness_search(const QuantityHandle& handle, const BitString& T_bits, Oracle& upper,
                             unsigned verify_factor = 10);

enum class Semidecision { yes, unknown };

struct SemidecisionReport {
  Semidecision answer = Semidecision::unknown;
  std::size_t m = 0;
  mpz_class k;
};

/// Answers yes (so T < r) once some h(m) < g(r, k) is certified with k >= k0;
/// unknown when `budget` oracle values or the oracle itself run out.
SemidecisionReport semidecide_above(const QuantityHandle& handle, const Dyadic& r, Oracle& upper,
                                    std::size_t budget = 64);

struct ReconstructionReport {
  Temperature T_true{1, 2};
  unsigned n = 0;
  Temperature u{3, 4};
  std::size_t beta_bits_used = 0;
  mpz_class k_e;
  std::size_t l_e = 0;
  std::size_t m_e = 0;
  Dyadic candidate;
  Dyadic radius;
  /// Upper bound on Σ_{i>k_e} |p_i|^(b_upper·u/T) 2^-|p_i|/T; the containment
  /// argument needs it below 2^-n.
  Dyadic raised_tail;
};

/// β = Σ |p|^b_upper 2^-|p|/u over the domain.
Enclosure beta_value(const QuantityHandle& handle, const Temperature& u, unsigned precision = kDefaultPrecision);
/// First ⌈T·n/u⌉ fractional bits of β.
BitString beta_prefix(const QuantityHandle& handle, const Temperature& u, unsigned n);

/// Recovers T to within 2^(a_lower + c_upper - n) from n, u, the first
/// ⌈T·n/u⌉ bits of β and the two oracles: A descending to T inside (T, t), B
/// ascending to f(T).
ReconstructionReport reconstruct_T(const QuantityHandle& handle, const Temperature& u, unsigned n,
                                   const BitString& beta_bits, Oracle& A, Oracle& B);

}  // namespace thermoait
