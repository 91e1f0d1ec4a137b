#include "esqoe/cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
    return esqoe::cli::dispatch(argc, argv, std::cout, std::cerr);
}
