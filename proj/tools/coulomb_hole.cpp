#include "chole/cli.hpp"

int main(int argc, char** argv) { return chole::cli::run(argc, argv); }
