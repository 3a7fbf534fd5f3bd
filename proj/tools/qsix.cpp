#include <iostream>
#include <string>
#include <vector>

#include "qsix/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qsix::run_cli(args, std::cout, std::cerr);
}
