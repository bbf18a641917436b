#include <iostream>
#include <string>
#include <vector>

#include "otmorph/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return otmorph::cli::run(args, std::cout, std::cerr);
}
