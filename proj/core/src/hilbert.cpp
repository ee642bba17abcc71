#include "wvlab/hilbert.hpp"

#include <cmath>

namespace wvlab {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_same_dim(int a, int b, const char* what) {
    if (a != b) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
}

} // namespace

OperatorMatrix annihilation(const FockSpace& space) {
    Matrix m = Matrix::Zero(space.cutoff, space.cutoff);
    for (int n = 1; n < space.cutoff; ++n) m(n - 1, n) = std::sqrt(double(n));
    return OperatorMatrix(std::move(m));
}

OperatorMatrix creation(const FockSpace& space) {
    Matrix m = annihilation(space).entries.adjoint();
    return OperatorMatrix(std::move(m));
}

OperatorMatrix number_op(const FockSpace& space) {
    Matrix m = Matrix::Zero(space.cutoff, space.cutoff);
    for (int n = 0; n < space.cutoff; ++n) m(n, n) = double(n);
    return OperatorMatrix(std::move(m), true);
}

OperatorMatrix position_op(const FockSpace& space) {
    const double scale = std::sqrt(space.hbar / (2.0 * space.mass * space.omega));
    Matrix a = annihilation(space).entries;
    Matrix m = scale * (a + a.adjoint().eval());
    return OperatorMatrix(std::move(m), true);
}

OperatorMatrix momentum_op(const FockSpace& space) {
    // p = sqrt(hbar m omega / 2) (a - a^dag)/i, so <0|p|1> = 1/(i sqrt(2)) at unit scale.
    const double scale = std::sqrt(space.hbar * space.mass * space.omega / 2.0);
    Matrix a = annihilation(space).entries;
    Matrix m = scale / kI * (a - a.adjoint().eval());
    return OperatorMatrix(std::move(m), true);
}

OperatorMatrix oscillator_hamiltonian(const FockSpace& space) {
    Matrix m = Matrix::Zero(space.cutoff, space.cutoff);
    for (int n = 0; n < space.cutoff; ++n)
        m(n, n) = space.hbar * space.omega * (double(n) + 0.5);
    return OperatorMatrix(std::move(m), true);
}

OperatorMatrix identity_op(const FockSpace& space) {
    return OperatorMatrix(Matrix::Identity(space.cutoff, space.cutoff), true);
}

StateVector coherent_state(const FockSpace& space, Complex alpha) {
    Vector c(space.cutoff);
    // c_n = e^{-|a|^2/2} a^n / sqrt(n!), built by the stable recurrence
    // c_{n+1} = c_n * a / sqrt(n+1).
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < space.cutoff; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
    const double tail = 1.0 - c.squaredNorm();
    if (tail > 1e-10)
        throw TailTooHeavy("coherent_state: truncated tail weight " + std::to_string(tail) +
                           " exceeds 1e-10 (raise cutoff; heuristic |a|^2 + 6|a| + 10)");
    StateVector s(std::move(c));
    return s;
}

StateVector superposition(const FockSpace& space, const std::vector<std::pair<int, Complex>>& coeffs) {
    Vector c = Vector::Zero(space.cutoff);
    for (const auto& [n, amp] : coeffs) {
        if (n < 0 || n >= space.cutoff)
            throw IndexOutOfRange("superposition: Fock index " + std::to_string(n) +
                                  " outside cutoff " + std::to_string(space.cutoff));
        c(n) += amp;
    }
    return StateVector(std::move(c));
}

Complex inner(const StateVector& bra, const StateVector& ket) {
    check_same_dim(bra.dim(), ket.dim(), "inner");
    return bra.amps.dot(ket.amps); // Eigen dot conjugates the left argument
}

FreePropagator::FreePropagator(const OperatorMatrix& h) {
    if (h.hermiticity_defect() > 1e-9)
        throw DimensionMismatch("FreePropagator: generator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries);
    eigvals_ = es.eigenvalues();
    eigvecs_ = es.eigenvectors();
}

Vector FreePropagator::apply(const Vector& v, double t) const {
    if (v.size() != eigvecs_.rows())
        throw DimensionMismatch("FreePropagator::apply: dimension mismatch");
    Vector w = eigvecs_.adjoint() * v;
    for (Eigen::Index k = 0; k < w.size(); ++k)
        w(k) *= std::exp(Complex(0.0, -eigvals_(k) * t));
    return eigvecs_ * w;
}

StateVector FreePropagator::apply(const StateVector& s, double t) const {
    StateVector out(apply(s.amps, t));
    out.normalized = s.normalized;
    return out;
}

StateVector evolve_free(const StateVector& state, const OperatorMatrix& h, double t) {
    if (state.dim() != h.dim()) throw DimensionMismatch("evolve_free: dimension mismatch");
    return FreePropagator(h).apply(state, t);
}

OperatorMatrix tensor(const OperatorMatrix& opA, const OperatorMatrix& opB) {
    const int da = opA.dim(), db = opB.dim();
    Matrix m(da * db, da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            m.block(i * db, j * db, db, db) = opA.entries(i, j) * opB.entries;
    return OperatorMatrix(std::move(m), opA.hermitian_hint && opB.hermitian_hint);
}

StateVector tensor_state(const StateVector& sA, const StateVector& sB) {
    const int da = sA.dim(), db = sB.dim();
    Vector v(da * db);
    for (int n = 0; n < da; ++n) v.segment(n * db, db) = sA.amps(n) * sB.amps;
    return StateVector(std::move(v));
}

Vector apply_kron(const Matrix& p, const Matrix& q, const Vector& psi) {
    const Eigen::Index d1 = p.rows(), d2 = q.rows();
    if (psi.size() != d1 * d2) throw DimensionMismatch("apply_kron: dimension mismatch");
    // Particle-1-major vec: Psi[n*d2+m] = M(n,m). (P kron Q) Psi = P M Q^T.
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        psi.data(), d1, d2);
    Matrix out = p * (m * q.transpose());
    Vector res(d1 * d2);
    Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        res.data(), d1, d2) = out;
    return res;
}

StateVector postselect_particle1(const StateVector& two_body, const StateVector& post) {
    const int d1 = post.dim();
    if (two_body.dim() % d1 != 0)
        throw DimensionMismatch("postselect_particle1: incompatible dimensions");
    const int d2 = two_body.dim() / d1;
    Vector phi = Vector::Zero(d2);
    for (int n = 0; n < d1; ++n)
        phi += std::conj(post.amps(n)) * two_body.amps.segment(n * d2, d2);
    return StateVector(std::move(phi));
}

} // namespace wvlab
