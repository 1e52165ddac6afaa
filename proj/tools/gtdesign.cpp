#include <iostream>

#include "gtdesign/cli.hpp"

int main(int argc, char** argv) { return gtdesign::cli::run(argc, argv, std::cout, std::cerr); }
