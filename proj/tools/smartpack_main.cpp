#include <iostream>

#include "smartpack/cli.hpp"

int main(int argc, char** argv) {
  return smartpack::run_cli(argc, argv, std::cout, std::cerr);
}
