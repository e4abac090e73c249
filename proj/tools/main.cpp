#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  storyweave::cli::configure_logging();
  return storyweave::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
