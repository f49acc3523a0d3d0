#include <iostream>

#include "stratum/cli.hpp"

int main(int argc, char** argv) {
  return stratum::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
