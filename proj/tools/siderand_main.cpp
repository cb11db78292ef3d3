#include <iostream>
#include <string>
#include <vector>

#include "siderand/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::ios::sync_with_stdio(false);
  const int code = siderand::cli::run(args, std::cout, std::cerr);
  std::cout.flush();
  return code;
}
