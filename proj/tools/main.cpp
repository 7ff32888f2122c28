#include <iostream>

#include "metric_center/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return metric_center::run_command(args, std::cout, std::cerr);
}
