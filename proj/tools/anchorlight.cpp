#include <iostream>

#include "anchorlight/cli.hpp"

int main(int argc, char** argv) { return anchorlight::cli::run(argc, argv, std::cout, std::cerr); }
