#include "vsumm/cli.hpp"

int main(int argc, char** argv) { return vsumm::cli::run(argc, argv); }
