#include "kz/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return kz::run(args, kz::CliEnv{});
}
