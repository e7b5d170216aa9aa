#include "picsim/cli_app.hpp"

int main(int argc, char** argv) { return picsim::cli_main(argc, argv); }
