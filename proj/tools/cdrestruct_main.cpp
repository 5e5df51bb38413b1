#include <iostream>

#include "cdrestruct/cli.hpp"

int main(int argc, char** argv) { return cdrestruct::run_cli(argc, argv, std::cout, std::cerr); }
