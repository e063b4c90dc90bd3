#include <iostream>

#include "framekit/cli.hpp"

int main(int argc, char** argv) { return framekit::run_cli(argc, argv, std::cout, std::cerr); }
