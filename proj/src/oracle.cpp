#include "thermoait/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <memory>

#include "thermoait/error.hpp"

namespace thermoait {
namespace {

// Multiple of `grain` at or beyond x in the direction of approach.
Dyadic snap(const Dyadic& x, const Dyadic& grain, Approach side) {
  const Rational ratio = x.to_rational() / grain.to_rational();
  mpz_class n;
  if (side == Approach::from_above) {
    mpz_cdiv_q(n.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
  } else {
    mpz_fdiv_q(n.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
  }
  return Dyadic(n, 0) * grain;
}

Dyadic grid_step(std::string_view spec) {
  const Dyadic step = Dyadic::parse(spec.substr(5));
  if (step.sign() <= 0) throw PreconditionError("oracle grid step must be positive");
  return step;
}

}  // namespace

Oracle::Oracle(std::string description, Generator generator)
    : description_(std::move(description)), generator_(std::move(generator)) {}

Oracle Oracle::from_values(std::string description, std::vector<Dyadic> values) {
  auto shared = std::make_shared<std::vector<Dyadic>>(std::move(values));
  return Oracle(std::move(description), [shared](std::size_t m) -> std::optional<Dyadic> {
    if (m > shared->size()) return std::nullopt;
    return (*shared)[m - 1];
  });
}

Oracle Oracle::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open oracle file '" + path + "'");
  std::vector<Dyadic> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    try {
      values.push_back(Dyadic::parse(std::string_view(line).substr(first, last - first + 1)));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return from_values("file:" + path, std::move(values));
}

const Dyadic& Oracle::at(std::size_t m) {
  if (!try_at(m)) {
    throw OracleExhausted("oracle '" + description_ + "' exhausted after " + std::to_string(values_.size()) +
                          " values");
  }
  return values_[m - 1];
}

std::optional<Dyadic> Oracle::try_at(std::size_t m) {
  if (m == 0) throw PreconditionError("oracle indices start at 1");
  while (values_.size() < m && !ended_) {
    auto v = generator_(values_.size() + 1);
    if (!v) {
      ended_ = true;
      break;
    }
    values_.push_back(std::move(*v));
  }
  if (values_.size() < m) return std::nullopt;
  return values_[m - 1];
}

Oracle make_oracle(std::string_view spec, const ValueFunction& value, Approach side, std::size_t max_terms) {
  if (spec.starts_with("file:")) return Oracle::from_file(std::string(spec.substr(5)));
  Dyadic unit(1);
  if (spec.starts_with("grid:")) {
    unit = grid_step(spec);
  } else if (spec != "closed-form") {
    throw PreconditionError("unknown oracle spec '" + std::string(spec) + "'");
  }
  struct State {
    std::optional<Dyadic> last;
  };
  auto state = std::make_shared<State>();
  return Oracle(std::string(spec), [=](std::size_t m) -> std::optional<Dyadic> {
    if (m > max_terms) return std::nullopt;
    const Dyadic grain = unit.ldexp(-static_cast<std::int64_t>(m));
    const Enclosure v = value(static_cast<unsigned>(m) + 32);
    Dyadic q = snap(side == Approach::from_above ? v.hi() : v.lo(), grain, side);
    // Coarser grains can round further out; keep the stream monotone.
    if (state->last) q = side == Approach::from_above ? std::min(q, *state->last) : std::max(q, *state->last);
    state->last = q;
    return q;
  });
}

Oracle make_descending_oracle(std::string_view spec, const Rational& T, const Rational& t, std::size_t max_terms) {
  if (spec.starts_with("file:")) return Oracle::from_file(std::string(spec.substr(5)));
  if (t <= T) throw PreconditionError("descending oracle needs T < t");
  Rational gap = t - T;
  if (spec.starts_with("grid:")) {
    gap = grid_step(spec).to_rational();
    if (T + gap / 2 >= t) throw PreconditionError("grid step too large for the window (T, t)");
  } else if (spec != "closed-form") {
    throw PreconditionError("unknown oracle spec '" + std::string(spec) + "'");
  }
  auto last = std::make_shared<std::optional<Dyadic>>();
  return Oracle(std::string(spec), [=](std::size_t l) -> std::optional<Dyadic> {
    if (l > max_terms) return std::nullopt;
    const Rational target = T + gap / (mpz_class(1) << static_cast<mp_bitcnt_t>(l));
    // Round up to a grain of a quarter of the offset, so the value stays above T
    // and below T + 2·offset·(5/8) <= t.
    const Rational offset = target - T;
    unsigned e = 0;
    while (Rational(1, 1) / (mpz_class(1) << e) > offset / 4) ++e;
    const Dyadic grain = Dyadic::pow2(-static_cast<std::int64_t>(e));
    Dyadic q = snap(approximate(target, e + 64, Rounding::up), grain, Approach::from_above);
    if (*last) q = std::min(q, **last);
    *last = q;
    return q;
  });
}

}  // namespace thermoait
