#include "sparsemode/cli.hpp"

int main(int argc, char** argv) { return sparsemode::run(argc, argv); }
