#pragma once

// Single-particle band topology (Harper-Hofstadter and its Aubry-Andre
// reduction) and instantaneous many-body spectra of the driven chains.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tpump/kernels.hpp"
#include "tpump/models.hpp"

namespace tpump {

/// Magnetic-cell Bloch matrix of the Harper-Hofstadter model in Landau gauge:
///     H_mm = -2 Jy cos(ky + 2 pi b m),  H_m,m+1 = -Jx,
/// with the cell boundary bond carrying e^{i kx}. kx is the supercell
/// momentum, so the family is 2 pi periodic in both arguments.
Eigen::MatrixXcd hh_bloch_hamiltonian(double kx, double ky, double Jx, double Jy, Rational b);

/// Aubry-Andre chain with onsite -2 Jy cos(2 pi b m + phase) and hopping -Jx.
struct AAParams {
  double Jx = 1.0;
  double Jy = 1.0;
  double omega = 0.02;
  double phi0 = 0.0;
  Rational b{};
};

/// Bloch form: identical to hh_bloch_hamiltonian(k, omega t + phi0, ...).
Eigen::MatrixXcd aa_bloch_hamiltonian(double k, double t, const AAParams& p);
/// Periodic real-space chain of n_sites.
Eigen::MatrixXd aa_real_space(std::size_t n_sites, double t, const AAParams& p);

/// AA parameters matching the one-excitation sector of the spin-flip model:
/// hopping J and modulation g1 (the constant g0 shift is dropped).
AAParams aa_from_drive(const DriveParams& d, double J);

/// q x q Hermitian matrices over the torus [0, 2 pi)^2.
struct BlochFamily {
  std::size_t dim = 0;
  std::function<Eigen::MatrixXcd(double, double)> h;

  static BlochFamily hofstadter(double Jx, double Jy, Rational b);
  /// (k, omega t) torus of the AA model; the second argument is omega t.
  static BlochFamily aubry_andre(const AAParams& p);
};

struct ChernOptions {
  int grid = 51;
  /// Multiply each eigenvector by a random phase drawn from this seed.
  std::optional<std::uint64_t> gauge_seed;
  Exec exec = Exec::parallel;
};

struct ChernResult {
  int band = 0;
  int chern = 0;
  double raw = 0.0;       // sum of plaquette phases / 2 pi before rounding
  double residual = 0.0;  // |raw - chern|
  double min_gap = 0.0;   // to the adjacent bands over the grid
  int grid = 0;
  std::vector<double> curvature;  // plaquette field strength, row-major grid x grid
};

/// Lattice field-strength (link-variable) Chern number of one band. Throws
/// DegeneracyError if the band touches a neighbour (gap < 1e-8) on the grid.
ChernResult chern_number(const BlochFamily& family, int band, const ChernOptions& opt = {});
std::vector<ChernResult> chern_numbers(const BlochFamily& family, const ChernOptions& opt = {});

/// Orthonormal basis (columns) of the eigenvalue-`eigenvalue` subspace of a
/// Pauli string P with P^2 = 1 and a non-zero X part.
Eigen::MatrixXcd symmetry_sector_basis(const PauliString& parity, int eigenvalue);

struct SectorSpectrum {
  std::vector<double> times;
  std::vector<std::vector<double>> energies;  // sorted, per time, excitation-count sector
  std::vector<double> gap;                    // E1 - E0 in the sector
  std::vector<double> tracked;                // lowest state followed by overlap continuity
  std::vector<double> gap_minima;             // times of local gap minima (anti-crossings)
  double min_gap = 0.0;
};

/// Eigenvalues of H(t) in the symmetry sector, classified by rounding <N>,
/// keeping states with excitation count `n_excitations`.
SectorSpectrum instantaneous_band_spectrum(const TimeDependentHamiltonian& H, ModelKind kind, int r,
                                           int n_excitations, const std::vector<double>& times);

/// Sector eigenstates at one time: energies ascending, with <N> per state.
struct SectorEigen {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd states;  // full-space columns
  Eigen::VectorXd excitation;
};
SectorEigen sector_eigensystem(const TimeDependentHamiltonian& H, ModelKind kind, int r, int n_excitations,
                               double t);

}  // namespace tpump
