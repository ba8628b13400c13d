#include <iostream>

#include "leakwise/report.hpp"

int main(int argc, char** argv) {
    return leakwise::cli::main_entry(argc, argv, std::cout, std::cerr);
}
