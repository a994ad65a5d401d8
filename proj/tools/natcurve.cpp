#include <string>
#include <vector>

#include "natcurve/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return natcurve::cli_main(args);
}
