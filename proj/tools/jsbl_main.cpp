#include "jsbl/cli.hpp"

int main(int argc, char** argv) { return jsbl::cli::parse_and_dispatch(argc, argv); }
