#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ffdpat/error.hpp"
#include "ffdpat/recon.hpp"
#include "ffdpat/selftest.hpp"
#include "helpers.hpp"

using namespace ffdpat;

TEST_CASE("algorithm names") {
  for (auto a : {Algorithm::landweber_one_step, Algorithm::proximal_one_step,
                 Algorithm::proximal_two_step}) {
    CHECK(parse_algorithm(to_string(a)) == a);
  }
  CHECK_THROWS_AS(parse_algorithm("fista"), InvalidArgument);
}

TEST_CASE("recon config validation") {
  ReconConfig c;
  CHECK_NOTHROW(c.validate());
  c.step_size = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.lambda = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.max_iters = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("prox of the gradient energy") {
  const GridSpec g{37, 23, 0.0, 0.0, 0.1, 0.1};
  const ScalarField2D f = random_field(g, 1);
  SUBCASE("tau = 0 is the identity") {
    CHECK(relative_l2_error(prox_gradient_energy(f, 0.0), f) == 0.0);
  }
  SUBCASE("constants are fixed") {
    ScalarField2D c(g);
    for (double& v : c.values()) v = -1.75;
    CHECK(relative_l2_error(prox_gradient_energy(c, 3.0), c) <= 1e-14);
  }
  SUBCASE("optimality of the discrete system") {
    for (double tau : {0.01, 0.5, 7.0}) CHECK(prox_optimality_residual(f, tau) <= 1e-10);
  }
  SUBCASE("firmly nonexpansive") {
    const ScalarField2D y = random_field(g, 2);
    for (double tau : {0.0, 0.1, 2.0}) {
      CHECK(norm(prox_gradient_energy(f, tau) - prox_gradient_energy(y, tau)) <=
            norm(f - y) * (1.0 + 1e-14));
    }
  }
  CHECK_THROWS_AS(prox_gradient_energy(f, -1.0), InvalidArgument);
}

TEST_CASE("zero data gives zero iterates") {
  const testing::Small s;
  const FfdOperator op = s.op(s.ring(), true, 24);
  const Sinogram zero(op.spec());
  ReconConfig c;
  c.max_iters = 3;
  for (auto a : {Algorithm::landweber_one_step, Algorithm::proximal_one_step,
                 Algorithm::proximal_two_step}) {
    c.algorithm = a;
    const ReconResult r = reconstruct(op, zero, c);
    CHECK(r.iterations == 3);
    CHECK(max_abs(r.h_final) == 0.0);
    CHECK(r.objective.size() == 3);
    CHECK(r.wall_ms.size() == 3);
    CHECK(r.rel_error.empty());
  }
}

TEST_CASE("first Landweber step is s W* X* Lambda G") {
  const testing::Small s;
  const FfdOperator op = s.op(s.ring(), true, 24);
  const Sinogram g = op.apply(s.bump());
  ReconConfig c;
  c.max_iters = 1;
  c.step_size = 0.3;
  const ReconResult r = landweber_one_step(op, g, c);
  const ScalarField2D expect = 0.3 * op.preconditioned_adjoint(g);
  CHECK(relative_l2_error(r.h_final, expect) <= 1e-14);
}

TEST_CASE("proximal one-step with lambda = 0 reproduces Landweber") {
  const testing::Small s;
  const FfdOperator op = s.op(s.ring(), true, 24);
  const Sinogram g = op.apply(s.bump(0.1, 0.0));
  ReconConfig c;
  c.max_iters = 6;
  c.lambda = 0.0;
  const ReconResult a = landweber_one_step(op, g, c);
  const ReconResult b = proximal_one_step(op, g, c);
  CHECK(relative_l2_error(b.h_final, a.h_final) <= 1e-14);
  for (std::size_t k = 0; k < a.objective.size(); ++k) CHECK(a.objective[k] == b.objective[k]);
}

TEST_CASE("Tikhonov objective") {
  const testing::Small s;
  const FfdOperator op = s.op(s.ring(), true, 24);
  const ScalarField2D h = s.bump(0.1, 0.0);
  const Sinogram g = op.apply(h);
  CHECK(tikhonov_objective(op, h, g, 0.0) <= 1e-20 * sino_inner(g, g));
  const double at_zero = tikhonov_objective(op, ScalarField2D(s.source), g, 0.5);
  CHECK(at_zero == doctest::Approx(0.5 * sino_inner(ramp_filter(g), g)).epsilon(1e-12));

  // central differences of the data term against <W* X* Lambda r, d>
  const Sinogram noisy = g + 0.1 * random_sinogram(op.spec(), 5);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const ScalarField2D at = random_field(s.source, seed);
    const ScalarField2D d = random_field(s.source, seed + 10);
    const double eps = 1e-3;
    const double fd = (tikhonov_objective(op, at + eps * d, noisy, 0.0) -
                       tikhonov_objective(op, at - (eps * d), noisy, 0.0)) /
                      (2.0 * eps);
    const double exact = inner(op.preconditioned_residual(at, noisy), d);
    CHECK(std::abs(fd - exact) <= 1e-5 * std::abs(exact));
  }
}

TEST_CASE("objective is non-increasing on a small noiseless instance") {
  const testing::Small s;
  const FfdOperator op = s.op(s.ring(), true, 24);
  const ScalarField2D h = s.bump(0.1, 0.0);
  ReconConfig c;
  c.max_iters = 20;
  c.truth = h;
  const ReconResult r = proximal_one_step(op, op.apply(h), c);
  for (std::size_t k = 1; k < r.objective.size(); ++k) {
    CHECK(r.objective[k] <= r.objective[k - 1]);
  }
  CHECK(r.rel_error.size() == 20);
}

TEST_CASE("Landweber error decreases geometrically on full constant-speed data") {
  const testing::Small s;
  const FfdOperator op = s.op(s.flat(), false, 64);
  const ScalarField2D h = s.bump(0.05, -0.05);
  ReconConfig c;
  c.max_iters = 40;
  c.truth = h;
  const ReconResult r = landweber_one_step(op, op.apply(h), c);
  double worst_ratio = 0.0;
  for (std::size_t k = 5; k < r.rel_error.size(); ++k) {
    worst_ratio = std::max(worst_ratio, r.rel_error[k] / r.rel_error[k - 1]);
  }
  CHECK(worst_ratio < 1.0);
  CHECK(r.rel_error.back() < 0.5 * r.rel_error.front());
}

TEST_CASE("two-step converges on full consistent data") {
  const testing::Small s;
  const FfdOperator op = s.op(s.flat(), false, 96);
  const ScalarField2D h = s.bump();
  ReconConfig c;
  c.algorithm = Algorithm::proximal_two_step;
  c.lambda = 0.0;
  c.max_iters = 200;
  c.truth = h;
  const ReconResult r = reconstruct(op, op.apply(h), c);
  CHECK(r.rel_error.back() <= 0.05);
}

TEST_CASE("stop tolerance and line search") {
  const testing::Small s;
  const FfdOperator op = s.op(s.ring(), true, 24);
  const Sinogram g = op.apply(s.bump());
  ReconConfig c;
  c.max_iters = 500;
  c.stop_tol = 1e-2;
  const ReconResult r = proximal_one_step(op, g, c);
  CHECK(r.iterations < 500);

  ReconConfig big;
  big.max_iters = 8;
  big.step_size = 50.0;
  big.line_search = true;
  const ReconResult ls = proximal_one_step(op, g, big);
  for (std::size_t k = 1; k < ls.objective.size(); ++k) {
    CHECK(ls.objective[k] <= ls.objective[k - 1]);
  }
}

TEST_CASE("divergence guard") {
  const testing::Small s;
  const FfdOperator op = s.op(s.ring(), true, 24);
  ReconConfig c;
  c.step_size = 1e4;
  c.max_iters = 50;
  c.lambda = 0.0;
  CHECK_THROWS_AS(landweber_one_step(op, op.apply(s.bump()), c), DivergenceError);
}

TEST_CASE("iteration log") {
  testing::TempDir dir("csv");
  ReconResult r;
  r.iterations = 2;
  r.objective = {2.0, 1.0};
  r.wall_ms = {1.5, 3.0};
  write_iterations_csv(dir.path / "a.csv", r);
  std::ifstream is(dir.path / "a.csv");
  std::stringstream ss;
  ss << is.rdbuf();
  CHECK(ss.str() == "iter,objective,rel_l2_error,wall_ms\n1,2,,1.5\n2,1,,3\n");
  r.rel_error = {0.5, 0.25};
  write_iterations_csv(dir.path / "b.csv", r);
  std::ifstream ib(dir.path / "b.csv");
  std::string header, line;
  std::getline(ib, header);
  std::getline(ib, line);
  CHECK(line == "1,2,0.5,1.5");
}
