#include "superl/cli.hpp"

int main(int argc, char** argv) {
    return superl::run(std::vector<std::string>(argv + 1, argv + argc));
}
