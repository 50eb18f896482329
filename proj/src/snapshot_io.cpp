#include "thermoait/snapshot_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "thermoait/error.hpp"

namespace thermoait {
namespace {

constexpr const char* kMagic = "THERMOAIT-SNAPSHOT v1";

template <typename T>
T parse_number(const std::string& text, std::size_t line) {
  std::istringstream in(text);
  T v{};
  if (text.empty() || text[0] == '-' || !(in >> v) || !in.eof()) {
    throw ParseError("expected a natural number, got '" + text + "'", line);
  }
  return v;
}

mpz_class parse_big(const std::string& text, std::size_t line) {
  mpz_class v;
  if (text.empty() || v.set_str(text, 10) != 0 || v < 0) {
    throw ParseError("expected a natural number, got '" + text + "'", line);
  }
  return v;
}

std::string value_of(const std::string& field, const std::string& key, std::size_t line) {
  if (!field.starts_with(key + "=")) throw ParseError("expected '" + key + "=...'", line);
  return field.substr(key.size() + 1);
}

}  // namespace

void write_snapshot(std::ostream& out, const EnsembleSnapshot& s) {
  out << kMagic << '\n';
  out << "ensemble=" << s.id() << " budget=" << s.step_budget() << " maxlen=" << s.max_length() << '\n';
  for (const auto& [len, count] : s.census()) out << "L " << len << ' ' << count.get_str() << '\n';
  std::size_t index = 0;
  for (const auto& rec : s.programs()) {
    out << "P " << ++index << ' ' << rec.program.render() << ' ' << rec.output.render() << ' ' << rec.steps << '\n';
  }
  out << "KRAFT " << to_string(s.kraft_sum()) << '\n';
}

EnsembleSnapshot read_snapshot(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  const auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    return true;
  };

  if (!next() || line != kMagic) throw ParseError("missing '" + std::string(kMagic) + "' header", 1);
  if (!next()) throw ParseError("missing ensemble line", 2);
  std::istringstream header(line);
  std::string f_id, f_budget, f_maxlen, extra;
  if (!(header >> f_id >> f_budget >> f_maxlen) || (header >> extra)) {
    throw ParseError("expected 'ensemble=<id> budget=<n> maxlen=<n>'", lineno);
  }
  const std::string id = value_of(f_id, "ensemble", lineno);
  const auto budget = parse_number<std::uint64_t>(value_of(f_budget, "budget", lineno), lineno);
  const auto maxlen = parse_number<std::uint32_t>(value_of(f_maxlen, "maxlen", lineno), lineno);

  Census census;
  std::vector<ProgramRecord> programs;
  std::string kraft;
  bool saw_kraft = false;
  while (next()) {
    if (saw_kraft) throw ParseError("content after KRAFT line", lineno);
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "L") {
      std::string len, count;
      if (!(fields >> len >> count) || (fields >> extra)) throw ParseError("expected 'L <length> <count>'", lineno);
      if (!programs.empty()) throw ParseError("census line after program lines", lineno);
      if (!census.emplace(parse_number<std::uint32_t>(len, lineno), parse_big(count, lineno)).second) {
        throw ParseError("duplicate census length " + len, lineno);
      }
    } else if (tag == "P") {
      std::string index, bits, output, steps;
      if (!(fields >> index >> bits >> output >> steps) || (fields >> extra)) {
        throw ParseError("expected 'P <index> <bits> <output> <steps>'", lineno);
      }
      if (parse_number<std::size_t>(index, lineno) != programs.size() + 1) {
        throw ParseError("program index out of sequence", lineno);
      }
      try {
        programs.push_back({BitString::parse_rendered(bits), BitString::parse_rendered(output),
                            parse_number<std::uint64_t>(steps, lineno)});
      } catch (const ParseError& e) {
        if (e.line() != 0) throw;
        throw ParseError(e.what(), lineno);
      }
    } else if (tag == "KRAFT") {
      if (!(fields >> kraft) || (fields >> extra)) throw ParseError("expected 'KRAFT <num>/<den>'", lineno);
      saw_kraft = true;
    } else {
      throw ParseError("unexpected line '" + line + "'", lineno);
    }
  }
  if (!saw_kraft) throw ParseError("missing KRAFT line", lineno + 1);

  EnsembleSnapshot snapshot(id, budget, maxlen, std::move(programs), std::move(census));
  Rational recorded;
  try {
    recorded = parse_rational(kraft);
  } catch (const Error&) {
    throw ParseError("malformed KRAFT value '" + kraft + "'", lineno);
  }
  if (recorded != snapshot.kraft_sum()) {
    throw InvariantError("checksum mismatch: KRAFT " + kraft + " but census sums to " + to_string(snapshot.kraft_sum()));
  }
  return snapshot;
}

void save_snapshot(const EnsembleSnapshot& snapshot, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write snapshot '" + path + "'");
  write_snapshot(out, snapshot);
  if (!out.flush()) throw Error("write failed for snapshot '" + path + "'");
}

EnsembleSnapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read snapshot '" + path + "'");
  return read_snapshot(in);
}

}  // namespace thermoait
