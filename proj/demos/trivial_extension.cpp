// The family f = z, g = 1, h = 0 extends to z |z|^(m-1) outside the disk.
// Its complex dilatation has modulus (m-1)/(m+1); compare with the estimate.

#include <cstdio>

#include "univalens/univalens.hpp"

using namespace univalens;

int main() {
    for (double m : {1.0, 1.5, 2.0, 3.0, 5.0}) {
        loewner::ChainParams p;
        p.f = expr::parse("z");
        p.g = criteria::FnSource(expr::parse("1"));
        p.m = m;
        const qcext::ExtensionMap map(p);
        const qcext::KEstimate k = qcext::estimate_k_detailed(map, 1.001, 3.0);
        std::printf("m = %.1f   sup|mu| = %.8f   (m-1)/(m+1) = %.8f   F(2i) = %s\n", m, k.k, (m - 1.0) / (m + 1.0),
                    to_string(qcext::extend(map, {0.0, 2.0})).c_str());
    }
}
