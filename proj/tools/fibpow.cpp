#include "fibpow/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return fibpow::run_cli(argc, argv, std::cout, std::cerr); }
