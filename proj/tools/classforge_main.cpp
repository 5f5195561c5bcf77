#include <iostream>
#include <vector>

#include "classforge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return classforge::cli::dispatch(args, std::cout, std::cerr);
}
