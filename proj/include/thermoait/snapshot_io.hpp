#pragma once

#include <iosfwd>
#include <string>

#include "thermoait/ensemble.hpp"

namespace thermoait {

/// Text snapshot format:
///
///   THERMOAIT-SNAPSHOT v1
///   ensemble=<id> budget=<n> maxlen=<n>
///   L <length> <count>              (one per nonzero census entry)
///   P <index> <bits> <output|-> <steps>
///   KRAFT <num>/<den>               (census Kraft sum, reduced)
void write_snapshot(std::ostream& out, const EnsembleSnapshot& snapshot);
EnsembleSnapshot read_snapshot(std::istream& in);

void save_snapshot(const EnsembleSnapshot& snapshot, const std::string& path);
/// Throws ParseError (with line number), InvariantError ("prefix-free
/// violation", "Kraft violation", "checksum mismatch", ...) or Error on I/O failure.
EnsembleSnapshot load_snapshot(const std::string& path);

}  // namespace thermoait
