#include <string>
#include <vector>

#include "blocktri/cli_commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return blocktri::cli::run_cli(args);
}
