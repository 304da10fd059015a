#include <iostream>

#include "ctrlpower/cli.hpp"

int main(int argc, char** argv) {
    return ctrlpower::run_cli(argc, argv, std::cout, std::cerr);
}
