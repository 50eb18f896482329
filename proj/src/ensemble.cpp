#include "thermoait/ensemble.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "thermoait/error.hpp"

namespace thermoait {
namespace {

std::uint32_t parse_u32(std::string_view text, std::string_view what) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw PreconditionError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::uint32_t floor_log2(std::uint64_t n) {
  std::uint32_t k = 0;
  while (n >>= 1) ++k;
  return k;
}

// SDM-4 domain sizes by opcode-stream length: a(j) counts halting programs of
// 2j bits. Non-halting opcodes take 2 bits (two choices) or 4 bits (three).
mpz_class sdm4_count(std::uint32_t pairs) {
  if (pairs == 0) return 0;
  mpz_class prev2 = 0;
  mpz_class prev = 1;  // a(1): "11"
  for (std::uint32_t j = 2; j <= pairs; ++j) {
    mpz_class next = 2 * prev + 3 * prev2;
    prev2 = std::move(prev);
    prev = std::move(next);
  }
  return prev;
}

void list_sdm4(std::uint32_t max_len, std::uint64_t budget, std::vector<ProgramRecord>& out) {
  std::string prefix;
  std::function<void()> walk = [&] {
    if (prefix.size() + 2 <= max_len) {
      const BitString program(prefix + "11");
      const RunResult r = run_sdm4(program, budget);
      if (r.halts_on_whole_input(program)) out.push_back({program, r.output, r.steps});
    }
    for (const char* op : {"00", "01"}) {
      if (prefix.size() + 4 > max_len) break;
      prefix += op;
      walk();
      prefix.resize(prefix.size() - 2);
    }
    for (const char* op : {"1000", "1001", "1010"}) {
      if (prefix.size() + 6 > max_len) break;
      prefix += op;
      walk();
      prefix.resize(prefix.size() - 4);
    }
  };
  walk();
}

void list_payload_machine(EnsembleKind kind, std::uint32_t max_len, std::uint64_t budget,
                          std::vector<ProgramRecord>& out) {
  for (std::uint64_t n = kind == EnsembleKind::literal ? 0 : 1;; ++n) {
    const BitString head = kind == EnsembleKind::literal ? BitString(std::string(n, '1') + "0") : elias_gamma(n);
    if (head.size() + n > max_len) break;
    const mpz_class count = mpz_class(1) << static_cast<mp_bitcnt_t>(n);
    for (mpz_class x = 0; x < count; ++x) {
      const BitString program = head + BitString::binary(x, n);
      const RunResult r = run_machine(kind, program, budget);
      if (r.halts_on_whole_input(program)) out.push_back({program, r.output, r.steps});
    }
  }
}

std::vector<ProgramRecord> read_program_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ensemble file '" + path + "'");
  std::vector<ProgramRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string program, output, extra;
    if (!(fields >> program)) continue;
    fields >> output;
    if (fields >> extra) throw ParseError("expected '<program> [<output>]'", lineno);
    try {
      out.push_back({BitString::parse_rendered(program),
                     output.empty() ? BitString() : BitString::parse_rendered(output), 0});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

}  // namespace

EnsembleSpec EnsembleSpec::parse(std::string_view text) {
  EnsembleSpec spec;
  if (text == "sdm4") {
    spec.kind = EnsembleKind::sdm4;
  } else if (text == "literal") {
    spec.kind = EnsembleKind::literal;
  } else if (text == "gamma_literal") {
    spec.kind = EnsembleKind::gamma_literal;
  } else if (text == "geometric") {
    spec.kind = EnsembleKind::geometric;
  } else if (text.starts_with("geometric:")) {
    spec.kind = EnsembleKind::geometric;
    spec.base = parse_u32(text.substr(10), "geometric base length");
    if (spec.base == 0) throw PreconditionError("geometric base length must be at least 1");
  } else if (text.starts_with("file:")) {
    spec.kind = EnsembleKind::file;
    spec.path = std::string(text.substr(5));
    if (spec.path.empty()) throw PreconditionError("file ensemble needs a path");
  } else {
    throw PreconditionError("unknown ensemble '" + std::string(text) + "'");
  }
  return spec;
}

std::string EnsembleSpec::id() const {
  switch (kind) {
    case EnsembleKind::sdm4: return "sdm4";
    case EnsembleKind::literal: return "literal";
    case EnsembleKind::gamma_literal: return "gamma_literal";
    case EnsembleKind::geometric: return base == 1 ? "geometric" : "geometric:" + std::to_string(base);
    case EnsembleKind::file: return "file:" + path;
  }
  return {};
}

bool EnsembleSpec::machine_backed() const {
  return kind == EnsembleKind::sdm4 || kind == EnsembleKind::literal || kind == EnsembleKind::gamma_literal;
}

EnsembleSnapshot::EnsembleSnapshot(std::string id, std::uint64_t step_budget, std::uint32_t max_length,
                                   std::vector<ProgramRecord> programs, Census census)
    : id_(std::move(id)),
      step_budget_(step_budget),
      max_length_(max_length),
      programs_(std::move(programs)),
      census_(std::move(census)) {
  for (const auto& [len, count] : census_) total_ += count;
  validate();
}

void EnsembleSnapshot::validate() const {
  for (const auto& [len, count] : census_) {
    if (count <= 0) throw InvariantError("census count at length " + std::to_string(len) + " is not positive");
    if (len > max_length_) throw InvariantError("census entry beyond max length");
  }
  for (const auto& rec : programs_) {
    if (rec.program.size() > max_length_) throw InvariantError("program " + rec.program.render() + " exceeds max length");
  }

  std::vector<const BitString*> lex;
  lex.reserve(programs_.size());
  for (const auto& rec : programs_) lex.push_back(&rec.program);
  std::sort(lex.begin(), lex.end(), [](const BitString* a, const BitString* b) { return a->str() < b->str(); });
  // In lexicographic order a prefix sorts immediately before some extension of
  // itself, so adjacent pairs suffice.
  for (std::size_t i = 1; i < lex.size(); ++i) {
    if (lex[i - 1]->is_prefix_of(*lex[i])) {
      throw InvariantError("prefix-free violation: " + lex[i - 1]->render() + " is a prefix of " + lex[i]->render());
    }
  }

  if (listed_kraft_sum() > 1) throw InvariantError("Kraft violation: listed programs sum above 1");
  if (kraft_sum() > 1) throw InvariantError("Kraft violation: census sums above 1");

  for (const auto& [len, n] : listed_census()) {
    const auto it = census_.find(len);
    if (it == census_.end() || it->second < n) {
      throw InvariantError("census below listed count at length " + std::to_string(len));
    }
  }

  for (std::size_t i = 1; i < programs_.size(); ++i) {
    if (!(programs_[i - 1].program < programs_[i].program)) {
      throw InvariantError("programs not in canonical (length, lexicographic) order at index " + std::to_string(i + 1));
    }
  }
}

std::uint32_t EnsembleSnapshot::shortest_length() const {
  if (census_.empty()) throw PreconditionError("empty ensemble");
  return census_.begin()->first;
}

std::uint32_t EnsembleSnapshot::length_at(const mpz_class& k) const {
  if (k < 1 || k > total_) {
    throw PreconditionError("position " + k.get_str() + " outside the census (total " + total_.get_str() + ")");
  }
  mpz_class seen = 0;
  for (const auto& [len, count] : census_) {
    seen += count;
    if (k <= seen) return len;
  }
  return census_.rbegin()->first;
}

std::vector<LengthCount> EnsembleSnapshot::lengths_through(const mpz_class& k) const {
  if (k < 1 || k > total_) {
    throw PreconditionError("k = " + k.get_str() + " exceeds the enumeration and its census (total " +
                            total_.get_str() + ")");
  }
  std::vector<LengthCount> out;
  mpz_class left = k;
  for (const auto& [len, count] : census_) {
    if (left <= 0) break;
    const mpz_class take = left < count ? left : count;
    out.push_back({len, take});
    left -= take;
  }
  return out;
}

Rational EnsembleSnapshot::kraft_sum() const { return kraft_sum_through(max_length_); }

Rational EnsembleSnapshot::kraft_sum_through(std::uint32_t L) const {
  Rational sum = 0;
  for (const auto& [len, count] : census_) {
    if (len > L) break;
    sum += Dyadic(count, -static_cast<std::int64_t>(len)).to_rational();
  }
  return sum;
}

Rational EnsembleSnapshot::listed_kraft_sum() const {
  Dyadic sum;
  for (const auto& rec : programs_) sum += Dyadic::pow2(-static_cast<std::int64_t>(rec.program.size()));
  return sum.to_rational();
}

std::map<std::uint32_t, std::size_t> EnsembleSnapshot::listed_census() const {
  std::map<std::uint32_t, std::size_t> out;
  for (const auto& rec : programs_) ++out[static_cast<std::uint32_t>(rec.program.size())];
  return out;
}

bool EnsembleSnapshot::listing_complete_through(std::uint32_t L) const {
  const auto listed = listed_census();
  for (const auto& [len, count] : census_) {
    if (len > L) break;
    const auto it = listed.find(len);
    if (it == listed.end() || count != it->second) return false;
  }
  return true;
}

std::uint32_t EnsembleSnapshot::max_listed_length() const {
  return programs_.empty() ? 0 : static_cast<std::uint32_t>(programs_.back().program.size());
}

std::uint32_t gamma_program_length(std::uint64_t n) { return static_cast<std::uint32_t>(n + 2 * floor_log2(n) + 1); }

mpz_class closed_census(const EnsembleSpec& spec, std::uint32_t length) {
  switch (spec.kind) {
    case EnsembleKind::sdm4:
      return length % 2 == 0 ? sdm4_count(length / 2) : mpz_class(0);
    case EnsembleKind::literal:
      return length % 2 == 1 ? mpz_class(1) << ((length - 1) / 2) : mpz_class(0);
    case EnsembleKind::gamma_literal:
      for (std::uint64_t n = 1; gamma_program_length(n) <= length; ++n) {
        if (gamma_program_length(n) == length) return mpz_class(1) << static_cast<mp_bitcnt_t>(n);
      }
      return 0;
    case EnsembleKind::geometric:
      return length >= spec.base ? 1 : 0;
    case EnsembleKind::file:
      break;
  }
  throw PreconditionError("ensemble '" + spec.id() + "' has no closed-form census");
}

Census closed_census_through(const EnsembleSpec& spec, std::uint32_t max_length) {
  Census census;
  switch (spec.kind) {
    case EnsembleKind::sdm4: {
      mpz_class prev2 = 0;
      mpz_class prev = 1;
      for (std::uint32_t len = 2; len <= max_length; len += 2) {
        census.emplace(len, prev);
        mpz_class next = 2 * prev + 3 * prev2;
        prev2 = std::move(prev);
        prev = std::move(next);
      }
      break;
    }
    case EnsembleKind::gamma_literal:
      for (std::uint64_t n = 1; gamma_program_length(n) <= max_length; ++n) {
        census.emplace(gamma_program_length(n), mpz_class(1) << static_cast<mp_bitcnt_t>(n));
      }
      break;
    default:
      for (std::uint32_t len = 0; len <= max_length; ++len) {
        mpz_class count = closed_census(spec, len);
        if (count > 0) census.emplace(len, std::move(count));
      }
  }
  return census;
}

std::uint32_t default_list_length(EnsembleKind kind, std::uint32_t max_length) {
  switch (kind) {
    case EnsembleKind::sdm4: return std::min<std::uint32_t>(max_length, 20);
    case EnsembleKind::literal: return std::min<std::uint32_t>(max_length, 21);
    case EnsembleKind::gamma_literal: return std::min<std::uint32_t>(max_length, 17);
    case EnsembleKind::geometric:
    case EnsembleKind::file: return max_length;
  }
  return max_length;
}

RunResult run_machine(EnsembleKind kind, const BitString& program, std::uint64_t step_budget) {
  switch (kind) {
    case EnsembleKind::sdm4: return run_sdm4(program, step_budget);
    case EnsembleKind::literal: return run_literal(program, step_budget);
    case EnsembleKind::gamma_literal: return run_gamma_literal(program, step_budget);
    default: break;
  }
  throw PreconditionError("ensemble kind has no interpreter");
}

EnsembleSnapshot enumerate(const EnsembleSpec& spec, std::uint64_t step_budget, std::uint32_t max_length,
                           std::optional<std::uint32_t> list_max_length) {
  if (max_length < 1) throw PreconditionError("max_length must be at least 1");
  if (spec.machine_backed() && step_budget < 1) throw PreconditionError("step budget must be at least 1");
  const std::uint32_t list_len = std::min(max_length, list_max_length.value_or(default_list_length(spec.kind, max_length)));

  std::vector<ProgramRecord> programs;
  Census census;
  switch (spec.kind) {
    case EnsembleKind::sdm4:
      list_sdm4(list_len, step_budget, programs);
      break;
    case EnsembleKind::literal:
    case EnsembleKind::gamma_literal:
      list_payload_machine(spec.kind, list_len, step_budget, programs);
      break;
    case EnsembleKind::geometric:
      for (std::uint32_t len = spec.base; len <= list_len; ++len) {
        programs.push_back({BitString(std::string(len - 1, '1') + "0"), BitString::binary(len), 0});
      }
      break;
    case EnsembleKind::file: {
      for (auto& rec : read_program_file(spec.path)) {
        if (rec.program.size() > max_length) continue;
        ++census[static_cast<std::uint32_t>(rec.program.size())];
        if (rec.program.size() <= list_len) programs.push_back(std::move(rec));
      }
      break;
    }
  }
  std::sort(programs.begin(), programs.end(),
            [](const ProgramRecord& a, const ProgramRecord& b) { return a.program < b.program; });

  if (spec.closed_form_census()) census = closed_census_through(spec, max_length);
  return EnsembleSnapshot(spec.id(), step_budget, max_length, std::move(programs), std::move(census));
}

void replay(const EnsembleSnapshot& snapshot) {
  const EnsembleSpec spec = snapshot.spec();
  if (!spec.machine_backed()) return;
  for (const auto& rec : snapshot.programs()) {
    const RunResult r = run_machine(spec.kind, rec.program, snapshot.step_budget());
    if (!r.halts_on_whole_input(rec.program) || r.output != rec.output || r.steps != rec.steps) {
      throw InvariantError("replay mismatch for program " + rec.program.render());
    }
  }
}

Enclosure census_tail_mass(const EnsembleSnapshot& snapshot, std::uint32_t L) {
  if (L > snapshot.max_length()) {
    throw PreconditionError("tail length " + std::to_string(L) + " beyond max length " +
                            std::to_string(snapshot.max_length()));
  }
  const EnsembleSpec spec = snapshot.spec();
  switch (spec.kind) {
    case EnsembleKind::geometric:
      return Dyadic::pow2(-static_cast<std::int64_t>(std::max(L, spec.base - 1)));
    case EnsembleKind::literal:
      // 1^m 0 x carries 2^-(m+1) per m; the first m past L is ceil(L/2)
      return Dyadic::pow2(-static_cast<std::int64_t>((L + 1) / 2));
    case EnsembleKind::gamma_literal: {
      // Payload lengths n in [2^j, 2^{j+1}) each carry 2^-(2j+1); the full
      // blocks above n_min's block sum to 2^-(j+1).
      std::uint64_t n_min = 1;
      while (gamma_program_length(n_min) <= L) ++n_min;
      const std::uint32_t j = floor_log2(n_min);
      const mpz_class partial = (mpz_class(1) << (j + 1)) - static_cast<unsigned long>(n_min);
      return Dyadic(partial, -static_cast<std::int64_t>(2 * j + 1)) + Dyadic::pow2(-static_cast<std::int64_t>(j + 1));
    }
    case EnsembleKind::sdm4:
    case EnsembleKind::file:
      break;
  }
  return {Dyadic(), Dyadic::exact(1 - snapshot.kraft_sum_through(L))};
}

}  // namespace thermoait
