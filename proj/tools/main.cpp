#include <iostream>

#include "jumpspec/cli.hpp"

int main(int argc, char** argv) { return jumpspec::run_cli(argc, argv, std::cout, std::cerr); }
