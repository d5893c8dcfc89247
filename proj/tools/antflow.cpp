#include <iostream>

#include "antflow/cli.hpp"

int main(int argc, char** argv) { return antflow::cli::run_cli(argc, argv, std::cout, std::cerr); }
