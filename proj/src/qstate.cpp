#include "qthermo/qstate.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace qthermo {

namespace {

double max_abs(const Matrix& m) {
    return m.cwiseAbs().maxCoeff();
}

void check_square(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        std::ostringstream err;
        err << what << " must be square and non-empty, got " << m.rows()
            << "x" << m.cols();
        throw std::invalid_argument(err.str());
    }
}

void check_hermitian(const Matrix& m, const char* what) {
    const double scale = std::max(1.0, max_abs(m));
    const double dev = max_abs(Matrix(m - m.adjoint()));
    if (dev > kHermiticityTol * scale) {
        std::ostringstream err;
        err << what << " violates hermiticity: max |M - M^dagger| = " << dev
            << " exceeds " << kHermiticityTol * scale;
        throw std::invalid_argument(err.str());
    }
}

}  // namespace

Eigensystem spectral_decompose(const Matrix& m) {
    check_square(m, "operator");
    check_hermitian(m, "operator");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed to converge");
    }
    Eigensystem eig{solver.eigenvalues(), solver.eigenvectors()};
    const Matrix recon =
        eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
    const double scale = std::max(1.0, max_abs(m));
    const double dev = max_abs(Matrix(recon - m));
    if (dev > kEigenReconstructTol * scale) {
        std::ostringstream err;
        err << "eigendecomposition reconstruction drift " << dev
            << " exceeds " << kEigenReconstructTol * scale;
        throw std::runtime_error(err.str());
    }
    return eig;
}

HermitianOperator::HermitianOperator(Matrix m) : mat_(std::move(m)) {
    eig_ = spectral_decompose(mat_);
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& entries) {
    Matrix m = Matrix::Zero(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, i) = entries[i];
    }
    return HermitianOperator(std::move(m));
}

int HermitianOperator::ground_degeneracy() const {
    const double width = std::max(1.0, max_eigenvalue() - min_eigenvalue());
    const double cut = min_eigenvalue() + kDegeneracyTol * width;
    int g = 0;
    for (int i = 0; i < dim(); ++i) {
        if (eig_.values(i) <= cut) ++g;
    }
    return g;
}

DensityMatrix::DensityMatrix(Matrix m, std::vector<int> subsystem_dims)
    : mat_(std::move(m)), subsystem_dims_(std::move(subsystem_dims)) {
    check_square(mat_, "state");
    check_hermitian(mat_, "state");

    const double tr_dev = std::abs(mat_.trace() - std::complex<double>(1.0, 0.0));
    if (tr_dev > kTraceTol * std::max(1.0, max_abs(mat_))) {
        std::ostringstream err;
        err << "state violates unit trace: |tr - 1| = " << tr_dev
            << " exceeds " << kTraceTol;
        throw std::invalid_argument(err.str());
    }

    if (subsystem_dims_.empty()) {
        subsystem_dims_ = {dim()};
    }
    long long prod = 1;
    for (int d : subsystem_dims_) {
        if (d < 1) {
            throw std::invalid_argument("subsystem_dims entries must be >= 1");
        }
        prod *= d;
    }
    if (prod != dim()) {
        std::ostringstream err;
        err << "subsystem_dims product " << prod << " does not match dim "
            << dim();
        throw std::invalid_argument(err.str());
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(mat_, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("state eigendecomposition failed");
    }
    spectrum_ = solver.eigenvalues();
    double sum = 0.0;
    for (int i = 0; i < spectrum_.size(); ++i) {
        if (spectrum_(i) < -kNegativityClamp) {
            std::ostringstream err;
            err << "state violates positivity: eigenvalue " << spectrum_(i)
                << " below -" << kNegativityClamp;
            throw std::invalid_argument(err.str());
        }
        spectrum_(i) = std::min(1.0, std::max(0.0, spectrum_(i)));
        sum += spectrum_(i);
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        spectrum_ /= sum;
    }
}

int DensityMatrix::rank(double threshold) const {
    int r = 0;
    for (int i = 0; i < spectrum_.size(); ++i) {
        if (spectrum_(i) > threshold) ++r;
    }
    return r;
}

double entropy_of_spectrum(const RealVector& p) {
    double s = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (p(i) > 0.0) s -= p(i) * std::log(p(i));
    }
    return s;
}

double entropy(const DensityMatrix& rho) {
    return entropy_of_spectrum(rho.spectrum());
}

double energy(const DensityMatrix& rho, const HermitianOperator& h) {
    if (rho.dim() != h.dim()) {
        std::ostringstream err;
        err << "state dim " << rho.dim() << " does not match hamiltonian dim "
            << h.dim();
        throw std::invalid_argument(err.str());
    }
    return (h.matrix() * rho.matrix()).trace().real();
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    const int da = a.dim(), db = b.dim();
    Matrix out(da * db, da * db);
    for (int i = 0; i < da; ++i) {
        for (int j = 0; j < da; ++j) {
            out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
        }
    }
    std::vector<int> dims = a.subsystem_dims();
    dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
    return DensityMatrix(std::move(out), std::move(dims));
}

HermitianOperator join_hamiltonians(const HermitianOperator& a,
                                    const HermitianOperator& b) {
    const int da = a.dim(), db = b.dim();
    Matrix out = Matrix::Zero(da * db, da * db);
    for (int i = 0; i < da; ++i) {
        for (int j = 0; j < da; ++j) {
            if (i == j) {
                out.block(i * db, j * db, db, db) = b.matrix();
                out.block(i * db, j * db, db, db).diagonal().array() +=
                    a.matrix()(i, i);
            } else {
                Matrix block = Matrix::Zero(db, db);
                block.diagonal().array() = a.matrix()(i, j);
                out.block(i * db, j * db, db, db) = block;
            }
        }
    }
    return HermitianOperator(std::move(out));
}

HermitianOperator join_hamiltonians(const std::vector<HermitianOperator>& parts) {
    if (parts.empty()) {
        throw std::invalid_argument("join_hamiltonians needs at least one part");
    }
    HermitianOperator acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        acc = join_hamiltonians(acc, parts[i]);
    }
    return acc;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
    const std::vector<int>& dims = rho.subsystem_dims();
    const int n = static_cast<int>(dims.size());
    std::vector<bool> kept(n, false);
    for (int k : keep) {
        if (k < 0 || k >= n) {
            std::ostringstream err;
            err << "partial_trace keep index " << k << " out of range [0, "
                << n << ")";
            throw std::invalid_argument(err.str());
        }
        if (kept[k]) {
            throw std::invalid_argument("partial_trace keep indices must be unique");
        }
        kept[k] = true;
    }
    std::vector<int> keep_sorted;
    std::vector<int> traced;
    for (int i = 0; i < n; ++i) {
        (kept[i] ? keep_sorted : traced).push_back(i);
    }
    if (keep_sorted.empty()) {
        throw std::invalid_argument("partial_trace must keep at least one subsystem");
    }

    int dk = 1;
    for (int i : keep_sorted) dk *= dims[i];
    int dt = 1;
    for (int i : traced) dt *= dims[i];

    // strides of each subsystem index in the flattened basis
    std::vector<long long> stride(n, 1);
    for (int i = n - 2; i >= 0; --i) {
        stride[i] = stride[i + 1] * dims[i + 1];
    }

    auto unflatten = [&](const std::vector<int>& subs, int flat,
                         std::vector<int>& idx) {
        for (int i = static_cast<int>(subs.size()) - 1; i >= 0; --i) {
            idx[i] = flat % dims[subs[i]];
            flat /= dims[subs[i]];
        }
    };

    Matrix out = Matrix::Zero(dk, dk);
    std::vector<int> ki(keep_sorted.size()), kj(keep_sorted.size()),
        ti(traced.size());
    for (int a = 0; a < dk; ++a) {
        unflatten(keep_sorted, a, ki);
        for (int b = 0; b < dk; ++b) {
            unflatten(keep_sorted, b, kj);
            std::complex<double> acc = 0.0;
            for (int t = 0; t < dt; ++t) {
                unflatten(traced, t, ti);
                long long row = 0, col = 0;
                for (std::size_t s = 0; s < keep_sorted.size(); ++s) {
                    row += ki[s] * stride[keep_sorted[s]];
                    col += kj[s] * stride[keep_sorted[s]];
                }
                for (std::size_t s = 0; s < traced.size(); ++s) {
                    row += ti[s] * stride[traced[s]];
                    col += ti[s] * stride[traced[s]];
                }
                acc += rho.matrix()(row, col);
            }
            out(a, b) = acc;
        }
    }
    std::vector<int> out_dims;
    for (int i : keep_sorted) out_dims.push_back(dims[i]);
    return DensityMatrix(std::move(out), std::move(out_dims));
}

double mutual_information(const DensityMatrix& rho, int split) {
    const int n = static_cast<int>(rho.subsystem_dims().size());
    if (n < 2 || split < 1 || split >= n) {
        throw std::invalid_argument(
            "mutual_information needs a declared bipartition with parts on both sides");
    }
    std::vector<int> left, right;
    for (int i = 0; i < split; ++i) left.push_back(i);
    for (int i = split; i < n; ++i) right.push_back(i);
    const double sa = entropy(partial_trace(rho, left));
    const double sb = entropy(partial_trace(rho, right));
    return sa + sb - entropy(rho);
}

namespace {

Matrix random_gaussian(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double re = dist(gen);
            const double im = dist(gen);
            g(i, j) = std::complex<double>(re, im);
        }
    }
    return g;
}

}  // namespace

DensityMatrix random_density_matrix(int dim, int rank, std::uint64_t seed) {
    if (dim < 1 || rank < 1 || rank > dim) {
        throw std::invalid_argument("random_density_matrix needs 1 <= rank <= dim");
    }
    const Matrix g = random_gaussian(dim, rank, seed);
    Matrix w = g * g.adjoint();
    w /= w.trace().real();
    // symmetrize away rounding drift so the constructor's checks stay exact
    w = 0.5 * (w + Matrix(w.adjoint()));
    return DensityMatrix(std::move(w));
}

Matrix random_unitary(int dim, std::uint64_t seed) {
    if (dim < 1) {
        throw std::invalid_argument("random_unitary needs dim >= 1");
    }
    const Matrix g = random_gaussian(dim, dim, seed ^ 0x9e3779b97f4a7c15ull);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const std::complex<double> d = r(i, i);
        const double a = std::abs(d);
        q.col(i) *= (a > 0.0) ? d / a : std::complex<double>(1.0, 0.0);
    }
    return q;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u) {
    if (u.rows() != rho.dim() || u.cols() != rho.dim()) {
        throw std::invalid_argument("unitary dimension does not match state");
    }
    const double unitary_dev =
        (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (unitary_dev > 1e-10) {
        std::ostringstream err;
        err << "matrix is not unitary: max |U^dagger U - I| = " << unitary_dev;
        throw std::invalid_argument(err.str());
    }
    Matrix out = u * rho.matrix() * u.adjoint();
    out = 0.5 * (out + Matrix(out.adjoint()));
    return DensityMatrix(std::move(out), rho.subsystem_dims());
}

}  // namespace qthermo
