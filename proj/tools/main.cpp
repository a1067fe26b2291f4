#include <iostream>

#include "radflow/cli.hpp"

int main(int argc, char** argv) { return radflow::cli::run(argc, argv, std::cout, std::cerr); }
