#include <iostream>

#include "sparseasm/cli.hpp"

int main(int argc, char** argv) { return sparseasm::main_entry(argc, argv, std::cout, std::cerr); }
