#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "ttrace/errors.hpp"
#include "ttrace/krylov.hpp"
#include "ttrace/oracle.hpp"
#include "ttrace/spin.hpp"

using namespace ttrace;
using test::tfim_spec;

namespace {
StoppingCriteria run_to_breakdown(int k = 100) {
  StoppingCriteria s;
  s.max_iterations = k;
  s.rel_change_tol = 0;  // disabled; stop on breakdown or cap
  return s;
}
}  // namespace

TEST_CASE("quadrature rule") {
  Eigen::MatrixXd t1(1, 1);
  t1 << 0.8;
  const auto r1 = quadrature(t1, 2.0, SpectralFunction::exp_neg_beta(-1.0));
  CHECK(r1.estimate == doctest::Approx(4.0 * std::exp(0.8)));
  CHECK(r1.ritz_values(0) == doctest::Approx(0.8));
  CHECK(r1.weights(0) == doctest::Approx(4.0));

  Eigen::MatrixXd t2(2, 2);
  t2 << 0, 1, 1, 0;
  CHECK(quadrature(t2, 1.0, SpectralFunction::power(2.0)).estimate == doctest::Approx(1.0));
}

TEST_CASE("assemble_jacobi") {
  JacobiMatrix j;
  j.alphas = {0.5};
  j.beta1 = 1.0;
  CHECK(assemble_jacobi(j, 1)(0, 0) == doctest::Approx(0.5));

  JacobiMatrix chiral;
  chiral.alphas = {0, 0, 0};
  chiral.betas = {0.3, 0.7};
  Eigen::MatrixXd t = assemble_jacobi(chiral, 3);
  Eigen::MatrixXd want(3, 3);
  want << 0, 0.3, 0, 0.3, 0, 0.7, 0, 0.7, 0;
  CHECK((t - want).norm() == doctest::Approx(0.0));

  CHECK_THROWS_AS(assemble_jacobi(chiral, 4), std::out_of_range);
  CHECK_THROWS_AS(assemble_jacobi(chiral, 0), std::out_of_range);
}

TEST_CASE("check_stop") {
  StoppingCriteria stop;
  stop.max_iterations = 50;
  stop.rel_change_tol = 1e-6;
  CHECK(check_stop({10.0, 10.000001}, stop, 2) == true);
  CHECK(check_stop({10.0, 11.0}, stop, 2) == false);
  CHECK(check_stop({5.0}, stop, 1) == false);
  CHECK(check_stop({5.0}, stop, 50) == true);  // cap reached
}

TEST_CASE("scaled identity terminates in one step") {
  const double c = 1.7;
  auto A = scalar_multiply(c, identity_mpo<double>(3));
  const auto report = run_lanczos(A, SpectralFunction::identity(), LanczosMode::Vanilla,
                                  exact_settings(), run_to_breakdown());
  CHECK(report.iterations == 1);
  CHECK(report.breakdown);
  CHECK(report.estimate == doctest::Approx(8.0 * c));
  CHECK(report.jacobi.alphas[0] == doctest::Approx(c));
}

TEST_CASE("tfim L=2 is exact at breakdown") {
  auto H = build_hamiltonian<double>(tfim_spec(2));
  const double want = 2 * std::cosh(std::sqrt(5.0)) + 2 * std::cosh(1.0);
  const auto report = run_lanczos(H, SpectralFunction::exp_neg_beta(1.0),
                                  LanczosMode::Vanilla, exact_settings(), run_to_breakdown());
  CHECK(report.breakdown);
  CHECK(report.iterations == 4);
  CHECK(test::rel_err(report.estimate, want) <= 1e-10);
  CHECK(report.estimate == doctest::Approx(12.5495).epsilon(1e-4));
  // beta_2 = sqrt(Tr H^2 / N)
  CHECK(report.jacobi.betas[0] == doctest::Approx(std::sqrt(3.0)));
  const Eigen::MatrixXd t2 = assemble_jacobi(report.jacobi, 2);
  CHECK(t2(0, 0) == doctest::Approx(0.0));
  CHECK(t2(0, 1) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("chiral modes match vanilla on the ising chain") {
  auto H = build_hamiltonian<double>(tfim_spec(2));
  const SpectralFunction f = SpectralFunction::exp_neg_beta(1.0);
  const auto v = run_lanczos(H, f, LanczosMode::Vanilla, exact_settings(), run_to_breakdown());
  const auto cf = run_lanczos(H, f, LanczosMode::ChiralFast, exact_settings(), run_to_breakdown());
  const auto cs = run_lanczos(H, f, LanczosMode::ChiralSafe, exact_settings(), run_to_breakdown());
  CHECK(test::rel_err(cf.estimate, v.estimate) <= 1e-10);
  CHECK(test::rel_err(cs.estimate, v.estimate) <= 1e-10);
  for (double a : cf.jacobi.alphas) CHECK(a == 0.0);
  for (double a : cs.jacobi.alphas) CHECK(a == 0.0);
  // the read-only monitor still sees the tiny true alphas
  CHECK(cf.max_abs_alpha <= 1e-12 * cf.jacobi.beta1);
}

TEST_CASE("recurrence matches the dense oracle without truncation") {
  std::mt19937 rng(17);
  for (int rep = 0; rep < 3; ++rep) {
    const Index L = 3 + rep;
    const InteractionSpec spec = tfim_spec(L, 1.0, 0.7 + 0.2 * rep);
    auto H = build_hamiltonian<double>(spec);
    const int K = 8;
    StoppingCriteria stop = run_to_breakdown(K);
    const auto tt = run_lanczos(H, SpectralFunction::exp_neg_beta(1.0), LanczosMode::Vanilla,
                                exact_settings(), stop);
    const auto dn = dense_global_lanczos(dense_hamiltonian(spec), K, false);
    REQUIRE(tt.jacobi.alphas.size() == dn.jacobi.alphas.size());
    CHECK(tt.jacobi.beta1 == doctest::Approx(dn.jacobi.beta1).epsilon(1e-10));
    for (std::size_t i = 0; i < tt.jacobi.alphas.size(); ++i)
      CHECK(std::abs(tt.jacobi.alphas[i] - dn.jacobi.alphas[i]) <= 1e-8 * dn.jacobi.beta1);
    for (std::size_t i = 0; i < std::min(tt.jacobi.betas.size(), dn.jacobi.betas.size()); ++i)
      CHECK(std::abs(tt.jacobi.betas[i] - dn.jacobi.betas[i]) <= 1e-8 * dn.jacobi.beta1);
  }
}

TEST_CASE("basis orthonormality at dense scale") {
  auto H = build_hamiltonian<double>(tfim_spec(4));
  RunHooks<double> hooks;
  std::vector<TensorTrain<double>> basis;
  hooks.retained_basis = &basis;
  hooks.monitors.enabled = false;
  const auto report = run_lanczos(H, SpectralFunction::exp_neg_beta(1.0),
                                  LanczosMode::Vanilla, exact_settings(),
                                  run_to_breakdown(12), hooks);
  REQUIRE(basis.size() >= 3);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double want = i == j ? 1.0 : 0.0;
      CHECK(std::abs(inner_product(basis[i], basis[j]) - want) <= 1e-8);
    }
}

TEST_CASE("estimates are reproducible from the stored coefficients") {
  auto H = build_hamiltonian<double>(tfim_spec(3));
  const SpectralFunction f = SpectralFunction::exp_neg_beta(0.5);
  const auto report = run_lanczos(H, f, LanczosMode::Vanilla, exact_settings(),
                                  run_to_breakdown(20));
  for (int i = 1; i <= report.iterations; ++i)
    CHECK(quadrature(report.jacobi, i, f).estimate ==
          doctest::Approx(report.estimates[static_cast<std::size_t>(i - 1)]).epsilon(1e-14));
}

TEST_CASE("non-hermitian input is refused") {
  std::mt19937 rng(23);
  auto X = test::random_tt<cd>(rng, 3, 2);  // generic: not Hermitian
  CHECK_THROWS_AS(run_lanczos(X, SpectralFunction::identity(), LanczosMode::Vanilla,
                              exact_settings(), run_to_breakdown(3)),
                  numerical_error);
}

TEST_CASE("auto mode at driver level falls back to vanilla with a warning") {
  auto H = build_hamiltonian<double>(tfim_spec(2));
  const auto report = run_lanczos(H, SpectralFunction::identity(), LanczosMode::Auto,
                                  exact_settings(), run_to_breakdown(2));
  CHECK(report.mode == LanczosMode::Vanilla);
  CHECK(!report.warnings.empty());
}

TEST_CASE("relative-change stopping") {
  auto H = build_hamiltonian<double>(tfim_spec(4));
  StoppingCriteria stop;
  stop.max_iterations = 100;
  stop.rel_change_tol = 1e-6;
  const auto report = run_lanczos(H, SpectralFunction::exp_neg_beta(1.0),
                                  LanczosMode::Vanilla, exact_settings(), stop);
  CHECK((report.stop_reason == StopReason::RelChange ||
         report.stop_reason == StopReason::Breakdown));
  if (report.stop_reason == StopReason::RelChange)
    CHECK(report.rows.back().rel_change < 1e-6);
}

TEST_CASE("per-iteration diagnostics cadence") {
  auto H = build_hamiltonian<double>(tfim_spec(3));
  RunHooks<double> hooks;
  hooks.monitors.enabled = true;
  hooks.monitors.trace_every = 1;
  hooks.monitors.commutation_every = 2;
  hooks.monitors.symmetry_every = 3;
  const auto report = run_lanczos(H, SpectralFunction::exp_neg_beta(1.0),
                                  LanczosMode::Vanilla, exact_settings(),
                                  run_to_breakdown(6), hooks);
  for (const auto& row : report.rows) {
    REQUIRE(row.diagnostics.has_value());
    CHECK(row.diagnostics->trace.has_value());
    CHECK(row.diagnostics->commutation.has_value() == (row.iteration % 2 == 0));
    CHECK(row.diagnostics->symmetry_residuals.empty() == (row.iteration % 3 != 0));
    // U_1 is the normalized identity; later operators inherit tracelessness
    if (row.iteration > 1) CHECK(row.diagnostics->trace->normalized <= 1e-10);
    if (row.diagnostics->commutation) CHECK(row.diagnostics->commutation->residual <= 1e-8);
  }
}
