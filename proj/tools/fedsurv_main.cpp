#include "fedsurv/cli.hpp"

int main(int argc, char** argv) { return fedsurv::run_cli(argc, argv); }
