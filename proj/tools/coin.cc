#include <iostream>

#include "coin/cli.hh"

int main(int argc, char **argv) { return coin::run_cli(argc, argv, std::cout, std::cerr); }
