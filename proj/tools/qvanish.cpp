#include <iostream>
#include <string>
#include <vector>

#include "qvanish_cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qvanish::cli::run(args, std::cout, std::cerr);
}
