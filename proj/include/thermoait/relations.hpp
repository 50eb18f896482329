#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermoait/thermo.hpp"

namespace thermoait {

enum class RelationId {
  F_deriv,     // F' = -S
  E_deriv,     // E' = C
  S_deriv,     // S' = C/T
  S_chain,     // W/(TZ) + log2 Z  vs  (E - F)/T
  gibbs_S,     // -Σ q log2 q  vs both forms above
  variance_C,  // (ln2/T^2)(Y/Z - (W/Z)^2)  vs  (ln2/T^2) Σ q (ℓ - E)^2
  F_identity,  // F  vs  -T log2 Z
  positivity,  // S, C >= 0, and > 0 where certified
  monotone,
};
std::string_view relation_name(RelationId id);

enum class Verdict { pass, fail, unresolved };
std::string_view verdict_name(Verdict v);

struct RelationReport {
  RelationId id;
  Temperature T{1, 2};
  Depth depth;
  Enclosure residual;
  Verdict verdict = Verdict::unresolved;
  std::string detail;
};

enum class DerivedQuantity { F, E, S };

/// Central difference of F_k, E_k or S_k against -S_k, C_k, C_k/T. Passes
/// when the residual lies inside [-K h^2, K h^2], K = sup|q'''|/6 on
/// [T-h, T+h] from an interval bound on the cumulants up to the fourth.
RelationReport check_derivative(const EnsembleSnapshot& snapshot, DerivedQuantity q, const Temperature& T,
                                const mpz_class& k, const Dyadic& h, unsigned precision = kDefaultPrecision);

/// Certified bound K (the residual budget is K h^2).
Dyadic derivative_error_constant(const EnsembleSnapshot& snapshot, DerivedQuantity q, const Temperature& T,
                                 const mpz_class& k, const Dyadic& h, unsigned precision = kDefaultPrecision);

/// residual(h) / residual(h/2), or empty when residual(h/2) is not resolved away from 0.
std::optional<Enclosure> richardson_ratio(const EnsembleSnapshot& snapshot, DerivedQuantity q, const Temperature& T,
                                          const mpz_class& k, const Dyadic& h, unsigned precision = kDefaultPrecision);

/// S_chain, gibbs_S, variance_C and F_identity at one temperature. Each passes
/// iff its independently computed enclosures overlap.
std::vector<RelationReport> check_identities(const EnsembleSnapshot& snapshot, const Temperature& T, const Depth& depth,
                                             unsigned precision = kDefaultPrecision);

/// One report per grid point. Limits and prefixes with two distinct lengths
/// need certified S > 0 (and C > 0 at the limit); otherwise S, C >= 0 suffices.
std::vector<RelationReport> check_positivity(const EnsembleSnapshot& snapshot, const std::vector<Temperature>& grid,
                                             const Depth& depth, unsigned precision = kDefaultPrecision);

enum class MonotoneQuantity { Z, F, E, S };

/// Z ascending, F descending, E ascending, S ascending over a strictly
/// increasing grid. Neighbours must compare in the claimed direction or be
/// the same exact value (E_1, F_1 and S_1 do not depend on T).
RelationReport check_monotone(const EnsembleSnapshot& snapshot, MonotoneQuantity q, const std::vector<Temperature>& grid,
                              const Depth& depth, unsigned precision = kDefaultPrecision);

/// First position whose prefix contains two distinct lengths.
mpz_class first_mixed_index(const EnsembleSnapshot& snapshot);

}  // namespace thermoait
