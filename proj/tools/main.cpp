#include "trollscope/cli.hpp"

int main(int argc, char** argv) { return trollscope::cli::run(argc, argv); }
