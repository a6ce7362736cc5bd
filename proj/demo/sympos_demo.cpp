// Sweeps the multiplier parameter c for the Keldysh-type preset
// K = eta - 1/2, k = 1, sigma = 1, tau = -1, reports the admissibility
// verdict for each, then solves the manufactured problem at the chosen c.

#include <cmath>
#include <cstdio>

#include "ehyp/ehyp.hpp"

using namespace ehyp;

int main() {
  const ScalarFn one = [](double) { return 1.0; }, minus_one = [](double) { return -1.0; };
  const FirstOrderSystem sys = build_system(TypeChangeFn::linear(0.5), 1.0);

  CsvTable sweep({"c", "min_det_E", "kappa_min_eig", "mu_min_eig", "verdict"});
  for (double c : {0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0}) {
    const AdmissibilityReport r = verify_symmetric_positive(sys, 1.0, c, one, minus_one);
    const std::string verdict = r.admissible ? "admissible" : std::string(to_string(*r.failure_kind));
    sweep.row(std::vector<std::string>{fmt_double(c), fmt_double(r.min_det_E),
                                       r.kappa ? fmt_double(r.kappa->kappa_min_eig) : "",
                                       r.boundary ? fmt_double(r.boundary->mu_min) : "", verdict});
  }
  std::fputs(sweep.str().c_str(), stdout);

  const MultiplierChoice ch = choose_parameters(sys.K, 1.0, one, minus_one);
  std::printf("\nchosen a=%.17g c=%.17g\n", ch.a, ch.c);

  // u = sin(xi) eta^2 / 2.
  auto u_eta = [](double e, double x) { return e * std::sin(x); };
  auto u_xi = [](double e, double x) { return 0.5 * e * e * std::cos(x); };
  auto f = [](double e, double x) {
    return e * std::sin(x) + (e - 0.5) * std::sin(x) - 0.5 * e * e * std::sin(x) + 0.5 * e * e * std::cos(x);
  };
  StrongOptions opt;
  opt.boundary_rhs = [&](double x) { return u_eta(1.0, x) - u_xi(1.0, x); };
  CsvTable conv({"n", "h", "l2_error", "interior_residual", "boundary_defect"});
  for (std::size_t n : {16u, 32u, 64u}) {
    const DiscreteSolution s = solve_strong(sys, ch, f, one, minus_one, {n, n}, opt);
    conv.row(std::vector<double>{static_cast<double>(n), s.h, strong_error_l2(s, u_eta, u_xi), s.interior_residual,
                                 s.boundary_defect});
  }
  std::fputs(conv.str().c_str(), stdout);
}
