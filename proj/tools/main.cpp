#include <iostream>
#include <string>
#include <vector>

#include "apnwb/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return apnwb::cli::run(args, std::cout, std::cerr);
}
