#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qthermo {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Validation tolerances shared by constructors and parsers. Hermiticity and
// trace deviations are measured relative to the largest matrix entry.
inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenReconstructTol = 1e-10;
inline constexpr double kNegativityClamp = 1e-12;
inline constexpr double kDegeneracyTol = 1e-12;

struct Eigensystem {
    RealVector values;   // ascending
    Matrix vectors;      // column k pairs with values[k]
};

// Decomposes a Hermitian matrix, sorting eigenvalues ascending. Throws
// std::invalid_argument on non-Hermitian input and std::runtime_error if the
// reconstruction V diag(w) V^dagger drifts beyond kEigenReconstructTol.
Eigensystem spectral_decompose(const Matrix& m);

class HermitianOperator {
  public:
    explicit HermitianOperator(Matrix m);

    static HermitianOperator diagonal(const std::vector<double>& entries);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }
    const Eigensystem& eigensystem() const { return eig_; }
    const RealVector& eigenvalues() const { return eig_.values; }
    const Matrix& eigenvectors() const { return eig_.vectors; }

    double min_eigenvalue() const { return eig_.values(0); }
    double max_eigenvalue() const { return eig_.values(dim() - 1); }
    // Number of eigenvalues within kDegeneracyTol (scaled by spectral width)
    // of the smallest one.
    int ground_degeneracy() const;

  private:
    Matrix mat_;
    Eigensystem eig_;
};

class DensityMatrix {
  public:
    explicit DensityMatrix(Matrix m, std::vector<int> subsystem_dims = {});

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }
    const std::vector<int>& subsystem_dims() const { return subsystem_dims_; }
    // Eigenvalues clamped to [0, 1], ascending, renormalized to unit sum.
    const RealVector& spectrum() const { return spectrum_; }
    int rank(double threshold = 1e-10) const;

  private:
    Matrix mat_;
    std::vector<int> subsystem_dims_;
    RealVector spectrum_;
};

// von Neumann entropy in nats, S = -sum p ln p over the clamped spectrum.
double entropy(const DensityMatrix& rho);
double entropy_of_spectrum(const RealVector& p);

// tr(H rho); throws std::invalid_argument on dimension mismatch.
double energy(const DensityMatrix& rho, const HermitianOperator& h);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Non-interacting join H_A (x) I + I (x) H_B.
HermitianOperator join_hamiltonians(const HermitianOperator& a,
                                    const HermitianOperator& b);
HermitianOperator join_hamiltonians(const std::vector<HermitianOperator>& parts);

// Keeps the listed subsystem indices (ascending order of the kept factors is
// preserved); traces out the rest.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);

// I(A:B) = S_A + S_B - S_AB across the cut before/after `split` subsystems.
double mutual_information(const DensityMatrix& rho, int split = 1);

// Wishart-style construction: G is dim x rank with iid standard complex
// normal entries, rho = G G^dagger / tr(G G^dagger). Deterministic per seed.
DensityMatrix random_density_matrix(int dim, int rank, std::uint64_t seed);

// Haar-like unitary from QR of a random complex Gaussian matrix with the
// R-diagonal phase fixed so the result is deterministic per seed.
Matrix random_unitary(int dim, std::uint64_t seed);

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u);

}  // namespace qthermo
