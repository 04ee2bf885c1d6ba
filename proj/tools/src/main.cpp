#include <iostream>

#include "edgepost/cli/run.hpp"

int main(int argc, char** argv) {
  return edgepost::cli::run_main(argc, argv, std::cout, std::cerr);
}
