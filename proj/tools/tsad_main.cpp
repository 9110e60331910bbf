#include <iostream>
#include <string>
#include <vector>

#include "tsad/cli/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tsad::cli::run(args, std::cout, std::cerr);
}
