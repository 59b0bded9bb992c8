#include <iostream>

#include "implicax/cli.hpp"

int main(int argc, char** argv) {
    return implicax::run_cli(argc, argv, std::cout, std::cerr);
}
