#include <iostream>
#include <string>
#include <vector>

#include "netsamp/cli.hpp"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return netsamp::execute(args, std::cout, std::cerr);
}
