#include "thermoait/complexity.hpp"

#include <algorithm>

#include "thermoait/error.hpp"
#include "thermoait/expansion.hpp"

namespace thermoait {

std::optional<std::uint32_t> ComplexityTable::H(const BitString& s) const {
  const auto it = entries.find(s);
  if (it == entries.end()) return std::nullopt;
  return it->second.min_length;
}

ComplexityTable build_table(const EnsembleSnapshot& snapshot) {
  if (!snapshot.spec().machine_backed()) {
    throw PreconditionError("complexity tables need a machine-backed ensemble, not '" + snapshot.id() + "'");
  }
  ComplexityTable table;
  table.ensemble = snapshot.id();
  // Programs come in shortlex order, so the first hit per output is the minimum.
  for (const auto& rec : snapshot.programs()) {
    table.entries.try_emplace(rec.output,
                              ComplexityEntry{static_cast<std::uint32_t>(rec.program.size()), rec.program});
  }
  const std::uint32_t longest = snapshot.max_listed_length();
  std::uint32_t complete = 0;
  while (complete < longest && snapshot.listing_complete_through(complete + 1)) ++complete;
  table.complete_through = complete;
  table.exactness = complete == longest ? Exactness::exact : Exactness::upper_bound;
  return table;
}

Profile profile(const Alpha& alpha, unsigned N, const ComplexityTable& table) {
  Profile out;
  for (unsigned n = 1; n <= N; ++n) {
    ProfileRow row;
    row.n = n;
    try {
      row.bits = std::holds_alternative<Rational>(alpha) ? bits_prefix(std::get<Rational>(alpha), n)
                                                         : bits_prefix(std::get<Enclosure>(alpha), n);
    } catch (const PrecisionError& e) {
      out.unresolved = true;
      out.note = "bit " + std::to_string(n) + " unresolved: " + e.what();
      break;
    }
    row.H = table.H(row.bits);
    if (row.H) row.ratio = Rational(*row.H, n);
    out.rows.push_back(std::move(row));
  }
  return out;
}

InvarianceGap invariance_gap(const ComplexityTable& a, const ComplexityTable& b,
                             std::optional<std::size_t> max_output_length) {
  InvarianceGap gap;
  bool first = true;
  for (const auto& [s, ea] : a.entries) {
    if (max_output_length && s.size() > *max_output_length) continue;
    const auto hb = b.H(s);
    if (!hb) continue;
    const long d = static_cast<long>(ea.min_length) - static_cast<long>(*hb);
    if (first) {
      gap.max_a_minus_b = d;
      gap.max_b_minus_a = -d;
      first = false;
    }
    gap.max_a_minus_b = std::max(gap.max_a_minus_b, d);
    gap.max_b_minus_a = std::max(gap.max_b_minus_a, -d);
    gap.max_abs = std::max(gap.max_abs, std::labs(d));
    ++gap.shared;
  }
  if (gap.shared == 0) throw PreconditionError("the two tables share no output");
  return gap;
}

}  // namespace thermoait
