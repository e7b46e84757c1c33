#include <iostream>

#include "gfc/cli.hpp"

int main(int argc, char** argv) {
  return gfc::run(argc, argv, std::cout, std::cerr);
}
