#include <CLI11.hpp>

#include "twinfock/twinfock.hpp"

int main(int argc, char** argv) {
  CLI::App app{"twinfock"};
  (void)argc;
  (void)argv;
  return 0;
}
