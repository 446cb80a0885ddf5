#include <string>
#include <vector>

#include "scatlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return scatlab::cli::run(args);
}
