#include "cks/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return cks::cli_dispatch({argv + 1, argv + argc}, std::cout, std::cerr);
}
