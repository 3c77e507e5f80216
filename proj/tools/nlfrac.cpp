#include <nlfrac/cli.hpp>

int main(int argc, char** argv) { return nlfrac::cli::run_cli(argc, argv); }
