#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermoait/bitstring.hpp"
#include "thermoait/dyadic.hpp"
#include "thermoait/enclosure.hpp"
#include "thermoait/machines.hpp"

namespace thermoait {

enum class EnsembleKind { sdm4, literal, gamma_literal, geometric, file };

/// Which ensemble to enumerate. Text form: `sdm4`, `literal`, `gamma_literal`,
/// `geometric`, `geometric:<base>` (shortest length), `file:<path>`.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::sdm4;
  std::uint32_t base = 1;
  std::string path;

  static EnsembleSpec parse(std::string_view text);
  std::string id() const;
  bool machine_backed() const;
  /// Exact length census for every length (everything except `file`).
  bool closed_form_census() const { return kind != EnsembleKind::file; }
};

struct ProgramRecord {
  BitString program;
  BitString output;
  std::uint64_t steps = 0;

  friend bool operator==(const ProgramRecord&, const ProgramRecord&) = default;
};

using Census = std::map<std::uint32_t, mpz_class>;

struct LengthCount {
  std::uint32_t length;
  mpz_class count;
};

/// Canonically ordered prefix of a prefix-free domain.
///
/// `census` covers every domain element of length <= max_length; `programs`
/// lists those that were enumerated individually (possibly only the shorter
/// ones). Positions k = 1, 2, ... refer to the canonical order of the whole
/// census, so quantities that depend only on lengths are defined for any k up
/// to total() even when the listing stops earlier.
class EnsembleSnapshot {
 public:
  /// Validates every invariant; throws InvariantError naming the first violation.
  EnsembleSnapshot(std::string id, std::uint64_t step_budget, std::uint32_t max_length,
                   std::vector<ProgramRecord> programs, Census census);

  const std::string& id() const noexcept { return id_; }
  EnsembleSpec spec() const { return EnsembleSpec::parse(id_); }
  std::uint64_t step_budget() const noexcept { return step_budget_; }
  std::uint32_t max_length() const noexcept { return max_length_; }
  const std::vector<ProgramRecord>& programs() const noexcept { return programs_; }
  const Census& census() const noexcept { return census_; }

  /// Number of domain elements of length <= max_length.
  const mpz_class& total() const noexcept { return total_; }
  std::uint32_t shortest_length() const;
  /// Length of the k-th element (1-based) in canonical order.
  std::uint32_t length_at(const mpz_class& k) const;
  /// Lengths of the first k elements grouped per length.
  std::vector<LengthCount> lengths_through(const mpz_class& k) const;
  /// Σ census(ℓ) 2^-ℓ, exactly.
  Rational kraft_sum() const;
  Rational kraft_sum_through(std::uint32_t L) const;
  /// Σ 2^-|p| over the listed programs.
  Rational listed_kraft_sum() const;
  std::map<std::uint32_t, std::size_t> listed_census() const;
  /// True when every domain element of length <= L is listed.
  bool listing_complete_through(std::uint32_t L) const;
  std::uint32_t max_listed_length() const;

  friend bool operator==(const EnsembleSnapshot&, const EnsembleSnapshot&) = default;

 private:
  void validate() const;

  std::string id_;
  std::uint64_t step_budget_;
  std::uint32_t max_length_;
  std::vector<ProgramRecord> programs_;
  Census census_;
  mpz_class total_;
};

/// Default cap on the individually listed programs for a kind.
std::uint32_t default_list_length(EnsembleKind kind, std::uint32_t max_length);

/// Deterministic canonical enumeration. Programs longer than `list_max_length`
/// (default: default_list_length) or needing more than `step_budget` steps are
/// not listed but still counted in the census when it has a closed form.
EnsembleSnapshot enumerate(const EnsembleSpec& spec, std::uint64_t step_budget, std::uint32_t max_length,
                           std::optional<std::uint32_t> list_max_length = std::nullopt);

/// Runs the interpreter of a machine-backed kind.
RunResult run_machine(EnsembleKind kind, const BitString& program, std::uint64_t step_budget);

/// Re-executes every listed program; throws InvariantError on the first mismatch.
void replay(const EnsembleSnapshot& snapshot);

/// Enclosure of Σ_{|p|>L} 2^-|p| over the full domain. Exact (a point) for kinds
/// with a closed-form census; otherwise [0, 1 - Σ_{ℓ<=L} census(ℓ) 2^-ℓ].
Enclosure census_tail_mass(const EnsembleSnapshot& snapshot, std::uint32_t L);

/// Number of domain elements of length ℓ for the closed-form kinds.
mpz_class closed_census(const EnsembleSpec& spec, std::uint32_t length);

/// Closed-form census for every length up to max_length.
Census closed_census_through(const EnsembleSpec& spec, std::uint32_t max_length);

/// Length of the gamma_literal programs with payload length n.
std::uint32_t gamma_program_length(std::uint64_t n);

}  // namespace thermoait
