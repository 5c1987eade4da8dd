#include "herisson/cli.hpp"

int main(int argc, char** argv) { return herisson::cli::run(argc, argv); }
