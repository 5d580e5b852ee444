#include "dct2net/cli.hpp"

int main(int argc, char** argv) {
    return dct2net::run_cli(argc, argv);
}
