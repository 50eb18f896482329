#include "thermoait/machines.hpp"

#include "thermoait/error.hpp"

namespace thermoait {
namespace {

// Reads bits on demand and charges one step per bit.
class BitReader {
 public:
  BitReader(const BitString& input, std::uint64_t budget) : input_(input), budget_(budget) {}

  // Returns -1 on end of input, -2 when the budget is spent.
  int next() {
    if (steps_ == budget_) return -2;
    if (pos_ == input_.size()) return -1;
    ++steps_;
    return input_.bit(pos_++) ? 1 : 0;
  }

  RunResult finish(RunStatus status, BitString output = {}) const {
    return {status, std::move(output), steps_, pos_};
  }

  RunResult fail(int code) const {
    return finish(code == -2 ? RunStatus::budget_exhausted : RunStatus::diverged);
  }

 private:
  const BitString& input_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
  std::size_t pos_ = 0;
};

}  // namespace

RunResult run_sdm4(const BitString& program, std::uint64_t step_budget) {
  BitString out;
  bool last = false;
  std::size_t pos = 0;
  std::uint64_t steps = 0;
  const auto read2 = [&](int& v) {
    if (pos + 2 > program.size()) return false;
    v = (program.bit(pos) ? 2 : 0) | (program.bit(pos + 1) ? 1 : 0);
    pos += 2;
    return true;
  };
  const auto stop = [&](RunStatus s) { return RunResult{s, s == RunStatus::halted ? out : BitString(), steps, pos}; };

  for (;;) {
    if (steps == step_budget) return stop(RunStatus::budget_exhausted);
    int op = 0;
    if (!read2(op)) return stop(RunStatus::diverged);
    ++steps;
    switch (op) {
      case 0b00:
      case 0b01:
        last = op == 0b01;
        out.push_back(last);
        break;
      case 0b11:
        return stop(RunStatus::halted);
      case 0b10: {
        int count = 0;
        if (!read2(count)) return stop(RunStatus::diverged);
        if (count == 0b11) return stop(RunStatus::diverged);
        for (int i = 0; i <= count; ++i) out.push_back(last);
        break;
      }
    }
  }
}

RunResult run_literal(const BitString& program, std::uint64_t step_budget) {
  BitReader in(program, step_budget);
  std::size_t n = 0;
  for (;;) {
    const int b = in.next();
    if (b < 0) return in.fail(b);
    if (b == 0) break;
    ++n;
  }
  BitString out;
  for (std::size_t i = 0; i < n; ++i) {
    const int b = in.next();
    if (b < 0) return in.fail(b);
    out.push_back(b == 1);
  }
  return in.finish(RunStatus::halted, std::move(out));
}

RunResult run_gamma_literal(const BitString& program, std::uint64_t step_budget) {
  BitReader in(program, step_budget);
  std::size_t zeros = 0;
  for (;;) {
    const int b = in.next();
    if (b < 0) return in.fail(b);
    if (b == 1) break;
    ++zeros;
  }
  // A payload length past 2^63 cannot be read from any finite input we accept.
  if (zeros >= 63) return in.finish(RunStatus::diverged);
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < zeros; ++i) {
    const int b = in.next();
    if (b < 0) return in.fail(b);
    n = (n << 1) | static_cast<std::uint64_t>(b);
  }
  BitString out;
  for (std::uint64_t i = 0; i < n; ++i) {
    const int b = in.next();
    if (b < 0) return in.fail(b);
    out.push_back(b == 1);
  }
  return in.finish(RunStatus::halted, std::move(out));
}

BitString elias_gamma(std::uint64_t n) {
  if (n == 0) throw DomainError("Elias gamma code needs n >= 1");
  const BitString digits = BitString::binary(mpz_class(static_cast<unsigned long>(n)));
  return BitString(std::string(digits.size() - 1, '0')) + digits;
}

}  // namespace thermoait
