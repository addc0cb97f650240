#include <iostream>

#include "cccp/cli.hpp"

int main(int argc, char** argv) { return cccp::run_cli(argc, argv, std::cout, std::cerr); }
