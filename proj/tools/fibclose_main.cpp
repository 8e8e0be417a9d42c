#include <fibclose/cli.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    return fibclose::run_cli(argc, argv, std::cout, std::cerr);
}
