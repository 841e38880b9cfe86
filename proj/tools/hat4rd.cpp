#include <iostream>

#include "hat/cli/commands.hpp"

int main(int argc, char** argv) { return hat::cli::run(argc, argv, std::cout, std::cerr); }
