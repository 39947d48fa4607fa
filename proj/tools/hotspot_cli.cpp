#include <iostream>

#include "hotspot/io/commands.hpp"

int main(int argc, char** argv) { return hotspot::io::run_cli(argc, argv, std::cout, std::cerr); }
