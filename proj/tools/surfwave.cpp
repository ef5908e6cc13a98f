#include <iostream>

#include "surfwave/cli.hpp"

int main(int argc, char** argv) { return surfwave::run_cli(argc, argv, std::cout, std::cerr); }
