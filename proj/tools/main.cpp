#include <iostream>

#include "freqint/cli.hpp"

int main(int argc, char** argv) {
  return freqint::cli::run(argc, argv, std::cout, std::cerr);
}
