#include <iostream>
#include <string>
#include <vector>

#include "koszul/driver.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto result = koszul::run_command(args);
    std::cout << result.text;
    return result.exit_code;
}
