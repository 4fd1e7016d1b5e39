#include <iostream>

#include "eegbench/commands.hpp"

int main(int argc, char** argv) { return eegbench::run_cli(argc, argv, std::cout, std::cerr); }
