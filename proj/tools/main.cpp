#include "cli.hpp"

int main(int argc, char** argv) { return bazykin::cli::run(argc, argv); }
