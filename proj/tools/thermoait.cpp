#include <iostream>

#include "thermoait/cli.hpp"

int main(int argc, char** argv) { return thermoait::cli::run(argc, argv, std::cout, std::cerr); }
