#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qenr/channel.hpp"
#include "qenr/sources.hpp"

#include <cmath>

using namespace qenr;

namespace {

ChainParams reference_chain(double gain_db = 61.1, double noise_temp = 8.0) {
  ChainParams chain;
  chain.gain = std::pow(10.0, gain_db / 10.0);
  chain.noise_temp_K = noise_temp;
  chain.f_signal_Hz = 5e9;
  chain.f_idler_Hz = 5e9;
  return chain;
}

}  // namespace

TEST_CASE("planck occupancy at the reference operating point") {
  CHECK(noise_photons(0.0, 5e9) == 0.0);
  const double n = noise_photons(8.0, 5e9);
  CHECK(n > 30.0);
  CHECK(n < 34.0);
  CHECK(std::abs(n - 32.8411) < 5e-4);
  // hf = kT ln 2 makes the occupancy exactly one.
  const double t_ln2 = 6.62607015e-34 * 5e9 / (1.380649e-23 * std::log(2.0));
  CHECK(noise_photons(t_ln2, 5e9) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("planck occupancy rejects bad arguments") {
  CHECK_THROWS_AS(noise_photons(8.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(noise_photons(8.0, -5e9), std::invalid_argument);
  CHECK_THROWS_AS(noise_photons(-1.0, 5e9), std::invalid_argument);
}

TEST_CASE("occupancy-temperature conversion round trips") {
  for (const double n : {0.01, 0.5, 1.0, 32.84, 300.0}) {
    const double t = temperature_for_occupancy(n, 5e9);
    CHECK(noise_photons(t, 5e9) == doctest::Approx(n).epsilon(1e-12));
  }
  CHECK(temperature_for_occupancy(0.0, 5e9) == 0.0);
}

TEST_CASE("loss at unit transmissivity is the identity map") {
  const GaussianState s = tms_state(0.9);
  const GaussianState out = apply_loss(s, 1.0, 0.0);
  CHECK((out.cov - s.cov).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("balanced loss halves the excess covariance") {
  const double r = 0.8;
  const GaussianState out = apply_loss(tms_state(r), 0.5, 0.0);
  const double diag = (std::cosh(2.0 * r) + 1.0) / 2.0;
  const double cross = std::sinh(2.0 * r) / 2.0;
  CHECK(out.cov(kIs, kIs) == doctest::Approx(diag).epsilon(1e-12));
  CHECK(out.cov(kIi, kIi) == doctest::Approx(diag).epsilon(1e-12));
  CHECK(out.cov(kIs, kIi) == doctest::Approx(cross).epsilon(1e-12));
  CHECK(out.cov(kQs, kQi) == doctest::Approx(-cross).epsilon(1e-12));
}

TEST_CASE("loss preserves vacuum") {
  for (const double eta : {0.1, 0.5, 0.99}) {
    const GaussianState out =
        apply_loss(GaussianState::vacuum(), eta, 0.0);
    CHECK((out.cov - Matrix4::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("loss validates its arguments") {
  const GaussianState s = tms_state(0.5);
  CHECK_THROWS_AS(apply_loss(s, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(apply_loss(s, 1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(apply_loss(s, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("loss output stays physical across the parameter range") {
  for (const double r : {0.0, 0.5, 1.5, 3.0}) {
    for (const double eta : {0.05, 0.3, 0.7, 1.0}) {
      for (const double n_env : {0.0, 1.0, 30.0}) {
        const GaussianState out = apply_loss(tms_state(r), eta, n_env);
        CHECK(is_physical(out.cov));
      }
    }
  }
}

TEST_CASE("loss cannot create entanglement from a separable input") {
  for (const double n : {0.1, 1.0, 10.0}) {
    for (const double eta : {0.3, 0.8, 1.0}) {
      const GaussianState out =
          apply_loss(classical_source(n, 1.0), eta, 0.5);
      CHECK(ppt_min_eigenvalue(out.cov) >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("unit-gain noiseless amplifier is the identity map") {
  const GaussianState s = tms_state(0.6);
  const DetectedState out = apply_amplifier(s, 1.0, 0.0);
  CHECK((out.cov_raw - s.cov).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("amplifier enforces the quantum noise limit") {
  const GaussianState vac = GaussianState::vacuum();
  CHECK_THROWS_AS(apply_amplifier(vac, 2.0, 0.2), std::invalid_argument);
  const DetectedState out = apply_amplifier(vac, 2.0, 0.25);
  CHECK(is_physical(out.cov_raw));
  CHECK(is_physical(calibrate(out).cov));
}

TEST_CASE("amplified cross-to-diagonal ratio is gain independent") {
  const double r = 0.9;
  const double n_add = 12.0;
  for (const double gain : {10.0, 1e4, 1e8}) {
    const DetectedState out = apply_amplifier(tms_state(r), gain, n_add);
    const double ratio = out.cov_raw(kIs, kIi) / out.cov_raw(kIs, kIs);
    CHECK(ratio == doctest::Approx(std::sinh(2.0 * r) /
                                   (std::cosh(2.0 * r) + 2.0 * n_add))
                       .epsilon(1e-12));
  }
}

TEST_CASE("identity chain leaves the state unchanged") {
  const DetectedState out =
      measurement_chain(tms_state(0.8), ChainParams::identity());
  CHECK((out.cov_raw - tms_state(0.8).cov).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("reference chain output matches the composite formula") {
  const ChainParams chain = reference_chain();
  const DetectedState out = measurement_chain(quantum_source(1.0), chain);
  const double n_sys = noise_photons(8.0, 5e9);
  CHECK(out.cov_raw(kIs, kIs) ==
        doctest::Approx(chain.gain * (3.0 + 2.0 * n_sys)).epsilon(1e-12));
  CHECK(out.cov_raw(kIi, kIi) ==
        doctest::Approx(chain.gain * (3.0 + 2.0 * n_sys)).epsilon(1e-12));
  CHECK(out.cov_raw(kIs, kIi) ==
        doctest::Approx(chain.gain * 2.8284271247461903).epsilon(1e-12));
  // Signal sits well below the noise floor in this regime.
  const double snr = 2.0 / (2.0 * n_sys);
  CHECK(snr < 0.05);
  CHECK(snr > 0.01);
}

TEST_CASE("chain outputs are physical") {
  ChainParams chain = reference_chain(40.0, 3.0);
  chain.eta_signal = 0.6;
  chain.eta_idler = 0.8;
  chain.env_temp_K = 2.0;
  for (const double n : {0.0, 0.3, 5.0}) {
    CHECK(is_physical(measurement_chain(quantum_source(n), chain).cov_raw));
    CHECK(is_physical(
        measurement_chain(classical_source(n, 1.0), chain).cov_raw));
  }
}

TEST_CASE("chains preserve separability of the classical source") {
  ChainParams chain = reference_chain(30.0, 6.0);
  for (const double n : {0.05, 1.0, 20.0}) {
    const DetectedState out =
        measurement_chain(classical_source(n, 1.0), chain);
    CHECK(ppt_min_eigenvalue(out.cov_raw) >= 1.0 - 1e-9);
    CHECK(ppt_min_eigenvalue(calibrate(out).cov) >= 1.0 - 1e-9);
  }
}

TEST_CASE("calibration inverts the chain at unit transmissivity") {
  for (const double gain_db : {0.0, 20.0, 61.1}) {
    for (const double temp : {2.0, 8.0}) {
      const ChainParams chain = reference_chain(gain_db, temp);
      if (chain.n_sys_signal() < (1.0 - 1.0 / chain.gain) / 2.0) continue;
      const GaussianState in = quantum_source(0.7);
      const GaussianState back = calibrate(measurement_chain(in, chain));
      const double scale = in.cov.cwiseAbs().maxCoeff();
      CHECK((back.cov - in.cov).cwiseAbs().maxCoeff() < 1e-9 * scale);
    }
  }
}

TEST_CASE("calibrating a vacuum run recovers the identity") {
  const ChainParams chain = reference_chain();
  const GaussianState back =
      calibrate(measurement_chain(GaussianState::vacuum(), chain));
  CHECK((back.cov - Matrix4::Identity()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("calibrated entanglement at half a photon") {
  const DetectedState out =
      measurement_chain(quantum_source(0.5), reference_chain());
  const double nu = ppt_min_eigenvalue(calibrate(out).cov);
  // (sqrt(n+1) - sqrt(n))^2 at n = 0.5 is 2 - sqrt(3).
  CHECK(std::abs(nu - 0.26794919243112270) < 1e-9);
}

TEST_CASE("calibration rejects an inconsistent chain description") {
  const ChainParams chain = reference_chain();
  DetectedState detected = measurement_chain(quantum_source(0.5), chain);
  // Claim more input-referred noise than the data contains.
  detected.chain.noise_temp_K = 16.0;
  CHECK_THROWS_AS(calibrate(detected), std::domain_error);
}

TEST_CASE("entanglement degrades monotonically with noise and loss") {
  double previous = 0.0;
  for (const double temp : {0.3, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    ChainParams chain = reference_chain(30.0, temp);
    const double nu = ppt_min_eigenvalue(
        calibrate(measurement_chain(quantum_source(1.0), chain)).cov);
    CHECK(nu >= previous);
    previous = nu;
  }
  double previous_eta = 2.0;
  for (const double eta : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    ChainParams chain = reference_chain(30.0, 8.0);
    chain.eta_signal = eta;
    chain.eta_idler = eta;
    const double nu = ppt_min_eigenvalue(
        calibrate(measurement_chain(quantum_source(1.0), chain)).cov);
    CHECK(nu <= previous_eta);
    previous_eta = nu;
  }
}

TEST_CASE("noise floor is the chain response to vacuum") {
  const ChainParams chain = reference_chain();
  const Matrix4 floor = detected_noise_floor(chain);
  CHECK(floor(kIs, kIs) ==
        doctest::Approx(chain.gain * (1.0 + 2.0 * chain.n_sys_signal()))
            .epsilon(1e-12));
  CHECK(floor(kIs, kIi) == 0.0);
}

TEST_CASE("chain parameter validation") {
  ChainParams chain;
  chain.gain = 0.5;
  CHECK_THROWS_AS(chain.validate(), std::invalid_argument);
  chain = ChainParams{};
  chain.eta_signal = 0.0;
  CHECK_THROWS_AS(chain.validate(), std::invalid_argument);
  chain = ChainParams{};
  chain.f_idler_Hz = -1.0;
  CHECK_THROWS_AS(chain.validate(), std::invalid_argument);
  CHECK_NOTHROW(ChainParams::identity().validate());
}
