#include "dcgroup/cli.hpp"

int main(int argc, char** argv) { return dcg::cli::main(argc, argv); }
