#pragma once

#include <cstdint>

#include "thermoait/bitstring.hpp"

namespace thermoait {

enum class RunStatus { halted, diverged, budget_exhausted };

struct RunResult {
  RunStatus status = RunStatus::diverged;
  BitString output;
  std::uint64_t steps = 0;
  /// Input bits read before the run stopped.
  std::size_t consumed = 0;

  /// True when `program` is exactly a domain element: the machine halts
  /// having read every bit and nothing more.
  bool halts_on_whole_input(const BitString& program) const {
    return status == RunStatus::halted && consumed == program.size();
  }
};

/// Two-bit-opcode toy machine. 00 emits 0, 01 emits 1, 11 halts,
/// 10bb repeats the last emitted bit bb+1 times (bb = 11 diverges; before
/// any emission the last bit counts as 0). One step per opcode. Running off
/// the end of the input diverges.
RunResult run_sdm4(const BitString& program, std::uint64_t step_budget);

/// 1^n 0 x with |x| = n; outputs x. One step per bit read.
RunResult run_literal(const BitString& program, std::uint64_t step_budget);

/// Elias-gamma code of n >= 1 followed by n payload bits; outputs the payload.
RunResult run_gamma_literal(const BitString& program, std::uint64_t step_budget);

/// Elias-gamma code of n >= 1.
BitString elias_gamma(std::uint64_t n);

}  // namespace thermoait
