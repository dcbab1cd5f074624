#include <iostream>
#include <string>
#include <vector>

#include "primesum/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return primesum::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
