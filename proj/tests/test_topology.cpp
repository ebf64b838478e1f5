#include <gtest/gtest.h>

#include <numbers>

#include <Eigen/Eigenvalues>

#include "tpump/errors.hpp"
#include "tpump/topology.hpp"

using namespace tpump;

namespace {
constexpr double kPi = std::numbers::pi;
Eigen::VectorXd eig(const Eigen::MatrixXcd& m) { return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues(); }
}  // namespace

TEST(Bloch, HermitianAndPeriodic) {
  for (double kx : {0.0, 0.4, 2.9}) {
    for (double ky : {0.0, 1.1, 5.0}) {
      const auto h = hh_bloch_hamiltonian(kx, ky, 1.0, 0.7, {1, 3});
      EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((h - hh_bloch_hamiltonian(kx + 2 * kPi, ky, 1.0, 0.7, {1, 3})).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((eig(h) - eig(hh_bloch_hamiltonian(kx, ky + 2 * kPi, 1.0, 0.7, {1, 3}))).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Bloch, DecoupledChainsIgnoreKy) {
  const Eigen::VectorXd a = eig(hh_bloch_hamiltonian(0.3, 0.0, 1.0, 0.0, {1, 3}));
  const Eigen::VectorXd b = eig(hh_bloch_hamiltonian(0.3, 2.2, 1.0, 0.0, {1, 3}));
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Bloch, SpectrumInvariantUnderMagneticTranslation) {
  // ky -> ky + 2 pi b relabels the sublattices
  const Eigen::VectorXd a = eig(hh_bloch_hamiltonian(0.5, 0.3, 1.0, 1.0, {1, 3}));
  const Eigen::VectorXd b = eig(hh_bloch_hamiltonian(0.5, 0.3 + 2 * kPi / 3, 1.0, 1.0, {1, 3}));
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Bloch, FlatBandsWithoutHopping) {
  AAParams p{.Jx = 0.0, .Jy = 1.5, .omega = 0.02, .phi0 = 0.2, .b = {1, 3}};
  const Eigen::VectorXd e = eig(aa_bloch_hamiltonian(0.9, 10.0, p));
  std::vector<double> want;
  for (int m = 0; m < 3; ++m) want.push_back(-3.0 * std::cos(2 * kPi * m / 3.0 + 0.2 + 0.2));
  std::ranges::sort(want);
  for (int m = 0; m < 3; ++m) EXPECT_NEAR(e(m), want[static_cast<std::size_t>(m)], 1e-12);
}

TEST(Bloch, AubryAndreEqualsHofstadterSlice) {
  AAParams p{.Jx = 0.8, .Jy = 1.3, .omega = 0.05, .phi0 = 0.4, .b = {1, 3}};
  for (double t : {0.0, 17.0}) {
    EXPECT_LT((aa_bloch_hamiltonian(1.2, t, p) - hh_bloch_hamiltonian(1.2, p.omega * t + p.phi0, 0.8, 1.3, {1, 3}))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

TEST(Bloch, RealSpaceChainIsUnionOfBlochSpectra) {
  AAParams p{.Jx = 1.0, .Jy = 3.0, .omega = 0.02, .phi0 = 0.0, .b = {1, 3}};
  for (double t : {0.0, 40.0, 123.0}) {
    const Eigen::VectorXd real = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(aa_real_space(9, t, p)).eigenvalues();
    std::vector<double> bloch;
    for (int k = 0; k < 3; ++k) {
      const Eigen::VectorXd e = eig(aa_bloch_hamiltonian(2 * kPi * k / 3.0, t, p));
      bloch.insert(bloch.end(), e.data(), e.data() + e.size());
    }
    std::ranges::sort(bloch);
    for (int i = 0; i < 9; ++i) EXPECT_NEAR(real(i), bloch[static_cast<std::size_t>(i)], 1e-10);
  }
}

TEST(Chern, HofstadterThirdFlux) {
  const auto res = chern_numbers(BlochFamily::hofstadter(1.0, 1.0, {1, 3}));
  ASSERT_EQ(res.size(), 3u);
  EXPECT_EQ(res[0].chern, -1);
  EXPECT_EQ(res[0].chern + res[1].chern + res[2].chern, 0);
  for (const auto& r : res) EXPECT_LT(r.residual, 0.01);
}

TEST(Chern, GridRefinementAndGaugeInvariance) {
  const auto fam = BlochFamily::aubry_andre(aa_from_drive(DriveParams{}, 1.0));
  ChernOptions coarse, fine, gauge;
  fine.grid = 101;
  gauge.gauge_seed = 99;
  const auto a = chern_numbers(fam, coarse), b = chern_numbers(fam, fine), c = chern_numbers(fam, gauge);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].chern, b[k].chern);
    EXPECT_EQ(a[k].chern, c[k].chern);
    EXPECT_NEAR(a[k].raw, c[k].raw, 1e-10);
  }
  EXPECT_EQ(a[0].chern, -1);
}

TEST(Chern, DegenerateBandsAreRejected) {
  EXPECT_THROW(chern_number(BlochFamily::hofstadter(0.0, 0.0, {1, 3}), 0), DegeneracyError);
  EXPECT_THROW(chern_number(BlochFamily::hofstadter(1.0, 1.0, {1, 3}), 3), ConfigError);
}

TEST(SectorSpectrum, CrossingsWithoutCouplingAndGapWithCoupling) {
  DriveParams p;
  p.n_sites = 6;
  std::vector<double> times;
  for (int i = 0; i <= 120; ++i) times.push_back(p.period() * i / 120.0);
  ModelSpec free;
  free.J = 0.0;
  const auto s0 = instantaneous_band_spectrum(build_model(free, p), ModelKind::spin_flip, 0, 2, times);
  EXPECT_LT(s0.min_gap, 1e-9);  // grid includes omega t = pi / 3
  const auto s1 = instantaneous_band_spectrum(build_model(ModelSpec{}, p), ModelKind::spin_flip, 0, 2, times);
  EXPECT_GT(s1.min_gap, 1.5);
  EXPECT_EQ(s1.gap_minima.size(), 3u);
}

TEST(SectorSpectrum, DualKindsAgree) {
  DriveParams p;
  p.n_sites = 6;
  for (double t : {0.0, 50.0}) {
    ModelSpec f;
    const auto ef = sector_eigensystem(build_model(f, p), ModelKind::spin_flip, 0, 2, t).energies;
    for (ModelKind k : {ModelKind::kink, ModelKind::cluster}) {
      ModelSpec s;
      s.kind = k;
      const auto e = sector_eigensystem(build_model(s, p), k, 0, 2, t).energies;
      ASSERT_EQ(e.size(), ef.size());
      EXPECT_LT((e - ef).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}
