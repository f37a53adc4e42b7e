// Checks f(z) = z/(1 - z^2/2) against the beta = 2 criterion and prints a few
// values of the integral operator F_2 next to the closed form.

#include <cmath>
#include <cstdio>

#include "univalens/univalens.hpp"

using namespace univalens;

int main() {
    const expr::FunctionExpr f = expr::parse("z/(1 - z^2/2)");

    criteria::CriterionSpec spec;
    spec.variant = criteria::Variant::corollary_c34;
    spec.beta = 2.0;
    const criteria::CriterionReport rep = criteria::check_criterion(spec, f);

    std::printf("first condition: sup %.9f (bound %.1f) at %s\n", rep.first.sup_estimate, rep.first.bound,
                to_string(rep.first.argmax).c_str());
    std::printf("main condition:  sup %.9f (bound %.1f) at %s\n", rep.main.sup_estimate, rep.main.bound,
                to_string(rep.main.argmax).c_str());
    std::printf("criterion %s\n\n", rep.overall ? "holds" : "fails");

    std::printf("%-8s %-22s %s\n", "x", "F_2(x)", "sqrt(2(x f(x) + log(1 - x^2/2)))");
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const cx F = quad::integral_operator(f, 2.0, x);
        const double closed = std::sqrt(2.0 * (x * f(x).real() + std::log(1.0 - x * x / 2.0)));
        std::printf("%-8.2f %-22.15f %.15f\n", x, F.real(), closed);
    }
}
