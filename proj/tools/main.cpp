#include <iostream>
#include <string>
#include <vector>

#include "mtasep/cli.hpp"

int main(int argc, char** argv) {
    return mtasep::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
