#include "warpflow/cli.hpp"

int main(int argc, char** argv) { return warpflow::dispatch(argc, argv); }
