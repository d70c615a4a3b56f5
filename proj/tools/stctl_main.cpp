#include "runner.hpp"

int main(int argc, char** argv) { return stctl::cli::run(argc, argv); }
