// Print a small table of symmetric power moments of Kl_2 and Kl_3.

#include <iostream>

#include "kloost/residue.hpp"

int main() {
    using namespace kloost;
    for (int nplus1 : {2, 3}) {
        for (int k = 1; k <= 6; ++k) {
            std::cout << "n+1=" << nplus1 << " k=" << k << ":";
            for (std::int64_t p : {5, 7, 11, 13})
                std::cout << " " << moment(nplus1, HighestWeight{k}, p).moment;
            std::cout << "\n";
        }
    }
}
