#include <iostream>
#include <string>
#include <vector>

#include "flsim/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return flsim::run_cli(args, std::cout, std::cerr);
}
