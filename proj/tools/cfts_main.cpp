#include "cfts/scenario.hpp"

int main(int argc, char** argv) { return cfts::cli_main(argc, argv); }
