#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return spde_lrt::cli::run(argc, argv, std::cout, std::cerr);
}
