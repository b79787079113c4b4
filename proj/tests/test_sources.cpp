#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qenr/sources.hpp"

#include <cmath>

using namespace qenr;

TEST_CASE("quantum source at zero power is vacuum") {
  const GaussianState s = quantum_source(0.0);
  CHECK((s.cov - Matrix4::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("quantum source matches tms entries at one photon") {
  const GaussianState s = quantum_source(1.0);
  CHECK(s.cov(kIs, kIs) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.cov(kIs, kIi) ==
        doctest::Approx(2.8284271247461903).epsilon(1e-12));
}

TEST_CASE("quantum source cross covariance is 2 sqrt(n(n+1))") {
  const GaussianState weak = quantum_source(0.01);
  CHECK(weak.cov(kIs, kIi) ==
        doctest::Approx(0.20099751242241780).epsilon(1e-12));
  for (const double n : {0.001, 0.05, 0.5, 2.0, 30.0}) {
    const GaussianState s = quantum_source(n);
    CHECK(s.cov(kIs, kIi) ==
          doctest::Approx(2.0 * std::sqrt(n * (n + 1.0))).epsilon(1e-12));
    CHECK(s.cov(kQs, kQi) ==
          doctest::Approx(-2.0 * std::sqrt(n * (n + 1.0))).epsilon(1e-12));
  }
}

TEST_CASE("quantum source rejects negative power") {
  CHECK_THROWS_AS(quantum_source(-1e-6), std::invalid_argument);
}

TEST_CASE("classical source with rho = 0 is two uncorrelated thermal modes") {
  const GaussianState s = classical_source(0.7, 0.0);
  CHECK(s.cov(kIs, kIs) == doctest::Approx(2.4).epsilon(1e-12));
  CHECK(s.cov(kIs, kIi) == 0.0);
  CHECK(s.cov(kQs, kQi) == 0.0);
}

TEST_CASE("classical source at rho = 1 sits on the separability boundary") {
  const GaussianState s = classical_source(1.0, 1.0);
  CHECK(s.cov(kIs, kIs) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.cov(kIs, kIi) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.cov(kQs, kQi) == doctest::Approx(-2.0).epsilon(1e-12));
  // PT spectrum of the boundary state is {|a-c|, |a+c|} = {1, 5}.
  const auto nu = symplectic_eigenvalues(partial_transpose(s.cov));
  CHECK(std::abs(nu[0] - 1.0) < 1e-9);
  CHECK(std::abs(nu[1] - 5.0) < 1e-9);
  for (const double n : {0.01, 0.1, 1.0, 10.0}) {
    CHECK(std::abs(ppt_min_eigenvalue(classical_source(n, 1.0)) - 1.0) <
          1e-9);
  }
}

TEST_CASE("classical source at rho = 0.99 stays separable") {
  CHECK(std::abs(ppt_min_eigenvalue(classical_source(1.0, 0.99)) - 1.02) <
        1e-9);
}

TEST_CASE("classical source rejects out-of-range correlation") {
  CHECK_THROWS_AS(classical_source(1.0, 1.0 + 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(classical_source(1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(classical_source(-1.0, 0.5), std::invalid_argument);
}

TEST_CASE("classical covariance bound") {
  CHECK(classical_covariance_bound(0.0) == 0.0);
  CHECK(classical_covariance_bound(1.0) == 2.0);
  CHECK(classical_covariance_bound(30.0) == 60.0);
  // The quantum source beats the bound at matched power.
  CHECK(quantum_source(1.0).cov(kIs, kIi) > classical_covariance_bound(1.0));
}

TEST_CASE("both sources emit the same per-mode power") {
  for (const double n : {0.0, 0.01, 0.3, 1.0, 12.0}) {
    for (const double rho : {0.0, 0.5, 0.99, 1.0}) {
      const double nq = photon_number(quantum_source(n), Mode::kSignal);
      const double nc = photon_number(classical_source(n, rho), Mode::kSignal);
      CHECK(nq == doctest::Approx(n).epsilon(1e-12));
      CHECK(nc == doctest::Approx(n).epsilon(1e-12));
      CHECK(photon_number(classical_source(n, rho), Mode::kIdler) ==
            doctest::Approx(n).epsilon(1e-12));
    }
  }
}

TEST_CASE("covariance advantage is sqrt(1 + 1/n)") {
  for (const double n : {0.01, 0.1, 1.0, 10.0}) {
    const double ratio = quantum_source(n).cov(kIs, kIi) /
                         classical_covariance_bound(n);
    CHECK(ratio == doctest::Approx(std::sqrt(1.0 + 1.0 / n)).epsilon(1e-12));
    CHECK(ratio > 1.0);
  }
}

TEST_CASE("entanglement dichotomy between the two sources") {
  for (const double n : {1e-4, 0.01, 0.1, 1.0, 10.0, 100.0}) {
    CHECK(ppt_min_eigenvalue(quantum_source(n)) < 1.0);
    for (const double rho : {0.0, 0.9, 0.99, 1.0}) {
      CHECK(ppt_min_eigenvalue(classical_source(n, rho)) >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("pump power maps monotonically to photon number") {
  CHECK(pump_to_photons(0.0, 1.0) == 0.0);
  const double p_one = std::asinh(1.0) * std::asinh(1.0);
  CHECK(pump_to_photons(p_one, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  double previous = 0.0;
  for (double p = 0.1; p < 3.0; p += 0.1) {
    const double n = pump_to_photons(p, 0.7);
    CHECK(n > previous);
    previous = n;
  }
  CHECK_THROWS_AS(pump_to_photons(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pump_to_photons(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("source spec factory dispatches on kind") {
  SourceSpec quantum{SourceKind::kQuantum, 0.5, 0.99};
  SourceSpec classical{SourceKind::kClassical, 0.5, 0.99};
  CHECK(make_source(quantum).cov(kIs, kIi) ==
        doctest::Approx(2.0 * std::sqrt(0.5 * 1.5)).epsilon(1e-12));
  CHECK(make_source(classical).cov(kIs, kIi) ==
        doctest::Approx(0.99).epsilon(1e-12));
  SourceSpec bad{SourceKind::kClassical, -1.0, 0.5};
  CHECK_THROWS_AS(make_source(bad), std::invalid_argument);
}
