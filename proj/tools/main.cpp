#include "oneatom/scenario.hpp"

int main(int argc, char** argv) { return oneatom::cli_main(argc, argv); }
