#include <iostream>
#include <string>
#include <vector>

#include "rankratio/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rankratio::run_cli(args, std::cout, std::cerr);
}
