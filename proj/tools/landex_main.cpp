#include "landex/cli.hpp"

int main(int argc, char** argv) { return landex::cli::run(argc, argv); }
