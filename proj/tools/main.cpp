#include <iostream>

#include "proxima/cli.hpp"

int main(int argc, char** argv) {
  return proxima::cli::run(argc, argv, std::cout, std::cerr);
}
