#pragma once

#include <ostream>

namespace thermoait::cli {

/// Runs one command line. Exit codes: 0 success, 1 a verification failed or a
/// search could not finish, 2 bad usage or input outside a domain.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thermoait::cli
