#include <string>
#include <vector>

#include "rgif/cli.hpp"

int main(int argc, char** argv) {
    return rgif::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
