#include "foundry/acceptance.hpp"
#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
  bool fast = argc > 1 && std::strcmp(argv[1], "--fast") == 0;
  int failures = foundry::run_acceptance(fast, std::cout);
  return failures == 0 ? 0 : 1;
}
