// Writes the Markdown table of pi and the unit sphere areas omega_{n-1}.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

#include "sfs/spaceform.hpp"

int main(int argc, char** argv) {
    std::ofstream file;
    if (argc > 1) {
        file.open(argv[1]);
        if (!file) {
            std::cerr << "cannot write " << argv[1] << "\n";
            return 2;
        }
    }
    std::ostream& out = argc > 1 ? file : std::cout;
    char buf[96];
    out << "# Constants\n\n";
    out << "Generated by `sfs_constants`.  Areas use the closed Gamma-function formula\n"
           "omega_{n-1} = 2 pi^{n/2} / Gamma(n/2).\n\n";
    std::snprintf(buf, sizeof buf, "pi = %.17g\n\n", std::numbers::pi);
    out << buf;
    out << "| n | omega_{n-1} = area of the unit sphere S^{n-1} |\n|---|---|\n";
    for (int n = 1; n <= 10; ++n) {
        std::snprintf(buf, sizeof buf, "| %d | %.17g |\n", n, sfs::unit_sphere_area(n));
        out << buf;
    }
    return 0;
}
