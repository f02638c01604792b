#include "hz/cli/run.hpp"

int main(int argc, char** argv) { return hz::cli::run(argc, argv); }
