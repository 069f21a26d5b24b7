#include <string>
#include <vector>

#include "logitmm_cli/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return logitmm::cli::run(args);
}
