#include <vector>

#include "nhpt/cli.hpp"

int main(int argc, char** argv) {
    return nhpt::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
