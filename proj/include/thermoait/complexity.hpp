#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "thermoait/bitstring.hpp"
#include "thermoait/ensemble.hpp"

namespace thermoait {

enum class Exactness { exact, upper_bound };

struct ComplexityEntry {
  std::uint32_t min_length = 0;
  BitString min_program;
};

/// Machine-relative program-size complexity over the listed programs.
struct ComplexityTable {
  std::string ensemble;
  std::map<BitString, ComplexityEntry> entries;
  Exactness exactness = Exactness::upper_bound;
  /// Every domain element up to this length is listed.
  std::uint32_t complete_through = 0;

  std::optional<std::uint32_t> H(const BitString& s) const;
};

/// Shortest (then shortlex-least) listed program per output. Exact when the
/// listing is complete up to its longest program: a shorter program for a
/// recorded output would then have been listed.
ComplexityTable build_table(const EnsembleSnapshot& snapshot);

struct ProfileRow {
  unsigned n = 0;
  BitString bits;
  std::optional<std::uint32_t> H;
  std::optional<Rational> ratio;
};

struct Profile {
  std::vector<ProfileRow> rows;
  /// Set when α's expansion could not be resolved past rows.size() bits.
  bool unresolved = false;
  std::string note;
};

using Alpha = std::variant<Rational, Enclosure>;

/// (n, α_n, H(α_n), H(α_n)/n) for n = 1..N. Outputs missing from the table
/// get no H rather than a guess.
Profile profile(const Alpha& alpha, unsigned N, const ComplexityTable& table);

struct InvarianceGap {
  long max_abs = 0;
  long max_a_minus_b = 0;
  long max_b_minus_a = 0;
  std::size_t shared = 0;
};

/// Maxima of H_A(s) - H_B(s) over outputs both tables record (optionally only
/// outputs up to a length). Throws PreconditionError when none are shared.
InvarianceGap invariance_gap(const ComplexityTable& a, const ComplexityTable& b,
                             std::optional<std::size_t> max_output_length = std::nullopt);

}  // namespace thermoait
