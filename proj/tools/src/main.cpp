#include "isched/cli/app.hpp"

#include <iostream>

int main(int argc, char **argv) {
    return isched::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
