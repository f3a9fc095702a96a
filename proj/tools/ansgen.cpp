#include <iostream>
#include <string>
#include <vector>

#include "ansgen/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ansgen::cli_main(args, std::cout, std::cerr);
}
