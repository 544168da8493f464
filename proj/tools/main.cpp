#include <iostream>
#include <string>
#include <vector>

#include "respkit/service/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return respkit::service::run_cli(args, std::cout, std::cerr);
}
