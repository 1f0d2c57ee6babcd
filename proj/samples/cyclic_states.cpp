// Finds the four reference cyclic states, builds the invariant that equals the
// Hamiltonian in the confining half-period, and prints the cycle phase and the
// ground-state Berry phase of each.

#include <iostream>
#include <numbers>

#include "paultrap/paultrap.hpp"

int main() {
    using namespace paultrap;
    const int rows[][2] = {{1, 4}, {1, 8}, {1, 3}, {2, 3}};
    std::cout.precision(9);
    for (const auto& r : rows) {
        const auto cfg = cis_search(r[0], r[1]);
        const auto spec = matching_coefficients(ClassicalSolution(cfg.profile()));
        const double cycle = theta(spec, cfg.tau_prime_over_tau);
        std::cout << "l=" << r[0] << " N'=" << r[1] << "  omega*tau=" << cfg.omega_tau
                  << "  tau'/tau=" << cfg.tau_prime_over_tau << "  theta(tau')/pi=" << cycle / std::numbers::pi
                  << "  chi_0/pi=" << berry_phase(0, cycle) / std::numbers::pi << '\n';
    }
}
