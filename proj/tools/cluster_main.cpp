#include "scpp/cli.hpp"

int main(int argc, char** argv) { return scpp::run_cli(argc, argv); }
