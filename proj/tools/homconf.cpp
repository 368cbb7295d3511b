#include <iostream>

#include "homconf/cli.hpp"

int main(int argc, char** argv) {
  return homconf::cli_main(argc, argv, std::cout, std::cerr);
}
