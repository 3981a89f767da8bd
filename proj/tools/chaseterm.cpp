#include <iostream>

#include "chaseterm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chaseterm::cli::main(std::move(args), std::cin, std::cout, std::cerr);
}
