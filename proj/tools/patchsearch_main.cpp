#include <iostream>
#include <string>
#include <vector>

#include "patchsearch/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return patchsearch::cli::run(args, std::cout, std::cerr);
}
