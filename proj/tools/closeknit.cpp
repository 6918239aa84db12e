#include <iostream>
#include <string>
#include <vector>

#include "closeknit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return closeknit::cli::run(args, std::cout, std::cerr);
}
