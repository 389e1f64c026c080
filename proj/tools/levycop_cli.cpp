#include <iostream>

#include "levycop/cli.hpp"

int main(int argc, char** argv) { return levycop::run_cli(argc, argv, std::cout, std::cerr); }
