#include <iostream>

#include "hamcond/cli.hpp"

int main(int argc, char** argv) { return hamcond::run_cli(argc, argv, std::cout, std::cerr); }
