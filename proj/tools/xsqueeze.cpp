#include "squeeze/cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
    return squeeze::cli::run(argc, argv, std::cout, std::cerr);
}
