#include "singreg/cli.hpp"

int main(int argc, char** argv) { return singreg::cli::run(argc, argv); }
