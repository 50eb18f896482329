#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermoait/ensemble.hpp"
#include "thermoait/temperature.hpp"

namespace thermoait {

enum class Extent { partial, limit };

enum class Quantity { Z, W, Y, F, E, S, C };
inline constexpr std::array<Quantity, 7> kAllQuantities = {Quantity::Z, Quantity::W, Quantity::Y, Quantity::F,
                                                            Quantity::E, Quantity::S, Quantity::C};
std::string_view quantity_name(Quantity q);

/// Either the first k programs of the canonical order or the k -> infinity limit.
struct Depth {
  Extent extent = Extent::limit;
  mpz_class k;

  static Depth prefix(mpz_class k) { return {Extent::partial, std::move(k)}; }
  static Depth limit() { return {Extent::limit, 0}; }
  bool is_limit() const { return extent == Extent::limit; }
  std::string str() const { return is_limit() ? "limit" : k.get_str(); }
};

struct ThermoEvaluation {
  Temperature T{1, 2};
  Extent extent = Extent::partial;
  /// Programs summed exactly; for a limit, everything up to tail_length.
  mpz_class k;
  std::uint32_t tail_length = 0;
  Enclosure Z, W, Y, F, E, S, C;
  /// Per quantity (kAllQuantities order): enclosure of limit minus the
  /// value over the first k programs. Zero for partial evaluations.
  std::array<Enclosure, 7> tail;

  const Enclosure& get(Quantity q) const;
  const Enclosure& tail_of(Quantity q) const { return tail[static_cast<std::size_t>(q)]; }
};

/// Length-grouped weights at one temperature, relative to the shortest
/// length ℓ1: v_ℓ = 2^-(ℓ-ℓ1)/T, so the first weight is exactly 1 and nothing
/// underflows at small T. R_j = Σ count·ℓ^j·v_ℓ.
class MomentTable {
 public:
  struct Row {
    std::uint32_t length;
    mpz_class count;
    Enclosure v;
  };

  MomentTable(const EnsembleSnapshot& snapshot, const Temperature& T, unsigned precision,
              std::optional<std::uint32_t> through_length = std::nullopt);

  const Temperature& temperature() const noexcept { return T_; }
  unsigned precision() const noexcept { return precision_; }
  std::uint32_t shortest() const noexcept { return l1_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  /// Rows for the first k programs; the last row's count is trimmed.
  std::vector<Row> rows_through(const mpz_class& k) const;
  /// R_0 .. R_order over the first k programs.
  std::vector<Enclosure> moments(const mpz_class& k, unsigned order) const;
  std::vector<Enclosure> moments(const std::vector<Row>& rows, unsigned order) const;

 private:
  Temperature T_;
  unsigned precision_;
  std::uint32_t l1_;
  std::vector<Row> rows_;
  std::vector<mpz_class> cumulative_;
};

/// Quantities derived from relative moments R0, R1, R2 (and the tails of a
/// limit, already folded into the R's).
struct DerivedQuantities {
  Enclosure F, E, S, C;
};
DerivedQuantities derive(const std::vector<Enclosure>& R, std::uint32_t l1, const Rational& T, unsigned precision);

/// Σ count·ℓ^j·2^(-ℓ·scale) over the rows, accumulated in row order.
Enclosure weighted_sum(const std::vector<LengthCount>& lengths, const Rational& scale, unsigned j, unsigned precision);

/// Definition-level partial sums over the first k programs. Accepts
/// 0 < T < kMaxProbeTemperature so that divergence studies can use it.
ThermoEvaluation eval_partial(const EnsembleSnapshot& snapshot, const Temperature& T, const mpz_class& k,
                              unsigned precision = kDefaultPrecision);

/// Certified limits for 0 < T < 1. Lengths up to max_length are summed and the
/// rest bounded by M_j(L,T)·census_tail_mass. Throws PrecisionError when
/// `max_width` is given and the Z enclosure cannot be made that narrow; the
/// message states the achievable width.
ThermoEvaluation eval_limit(const EnsembleSnapshot& snapshot, const Temperature& T,
                            unsigned precision = kDefaultPrecision, std::optional<Dyadic> max_width = std::nullopt);

ThermoEvaluation evaluate(const EnsembleSnapshot& snapshot, const Temperature& T, const Depth& depth,
                          unsigned precision = kDefaultPrecision);

/// max over integers ℓ > L of ℓ^j 2^-ℓ(1/T-1), for 0 < T < 1, as an upper bound.
Dyadic tail_factor(std::uint32_t L, const Rational& T, unsigned j, unsigned precision);

/// Upper bounds on Σ_{|p|>L} |p|^j 2^-|p|/T for j = 0..order.
std::vector<Dyadic> limit_tails(const EnsembleSnapshot& snapshot, const Temperature& T, unsigned order,
                                unsigned precision);

/// Σ_{i<=k} (2^-|p_i|/T)^n.
Enclosure power_sum(const EnsembleSnapshot& snapshot, const Temperature& T, unsigned n, const mpz_class& k,
                    unsigned precision = kDefaultPrecision);

/// One evaluation per grid point, in grid order. The grid must be strictly
/// increasing and inside (0,1) unless `divergence_study` is set.
std::vector<ThermoEvaluation> sweep(const EnsembleSnapshot& snapshot, const std::vector<Temperature>& grid,
                                    const Depth& depth, unsigned precision = kDefaultPrecision,
                                    bool divergence_study = false);

/// Entropy evaluated directly as -Σ q log2 q over the Gibbs distribution.
Enclosure gibbs_entropy(const EnsembleSnapshot& snapshot, const Temperature& T, const Depth& depth,
                        unsigned precision = kDefaultPrecision);
/// Specific heat evaluated as (ln2/T^2)·Σ q (ℓ - E)^2.
Enclosure variance_heat(const EnsembleSnapshot& snapshot, const Temperature& T, const Depth& depth,
                        unsigned precision = kDefaultPrecision);

struct DivergenceReport {
  bool exceeded = false;
  /// First L with Σ_{ℓ<=L} census(ℓ) 2^-ℓ/T > M, or the cap.
  std::uint32_t L = 0;
  std::uint32_t cap = 0;
  Enclosure partial;
  /// Certified limit when the series is known to converge (cap reached only).
  std::optional<Enclosure> limit;
};

/// Scans partial sums of a closed-form census. 0 < T < kMaxProbeTemperature.
DivergenceReport divergence_probe(const EnsembleSpec& spec, const Temperature& T, const Rational& M,
                                  std::uint32_t cap = 4096, unsigned precision = kDefaultPrecision);

/// Grid `a:b:step` (inclusive of b when it lands on the lattice).
std::vector<Temperature> parse_grid(std::string_view text);

}  // namespace thermoait
