#include <iostream>
#include <string>
#include <vector>

#include "qrotor/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qrotor::run_cli(args, std::cout, std::cerr);
}
