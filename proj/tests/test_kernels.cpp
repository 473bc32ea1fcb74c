// Serial reference kernels vs the OpenMP gather kernels. The two routes use
// different loop structures (scatter vs gather), so agreement is a real check.

#include "hcb/fock_kernels.hpp"
#include "hcb/model.hpp"

#include <doctest.h>

#include <random>

using namespace hcb;

namespace {

VectorXcd random_state(std::int64_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
    v.normalize();
    return v;
}

std::span<const Complex> span_of(const VectorXcd& v) {
    return {v.data(), static_cast<size_t>(v.size())};
}

} // namespace

TEST_CASE("scatter and gather Hamiltonian kernels agree") {
    const ModelParams p(1.0, 1.7, 11);
    const FockBasis basis(11, 5);
    const VectorXcd v = random_state(basis.dim(), 42);
    VectorXcd out_s(basis.dim()), out_p(basis.dim());
    serial::apply_hamiltonian(basis, p, span_of(v), {out_s.data(), static_cast<size_t>(out_s.size())});

    for (int threads : {1, 3}) {
        par::apply_hamiltonian(basis, p, span_of(v),
                               {out_p.data(), static_cast<size_t>(out_p.size())}, threads);
        CHECK((out_s - out_p).norm() < 1e-13);
    }
}

TEST_CASE("kernel observables agree across routes and thread counts") {
    const ModelParams p(1.2, 0.4, 10);
    const FockBasis basis(10, 4);
    const VectorXcd v = random_state(basis.dim(), 7);

    const auto n_s = serial::density(basis, span_of(v));
    const double j_s = serial::half_current(basis, p.hop, span_of(v));
    const double e_s = serial::energy_expectation(basis, p, span_of(v));

    for (int threads : {1, 2, 4}) {
        const auto n_p = par::density(basis, span_of(v), threads);
        for (size_t i = 0; i < n_s.size(); ++i) CHECK(n_s[i] == doctest::Approx(n_p[i]).epsilon(1e-13));
        CHECK(par::half_current(basis, p.hop, span_of(v), threads) == doctest::Approx(j_s).epsilon(1e-12));
        CHECK(par::energy_expectation(basis, p, span_of(v), threads) == doctest::Approx(e_s).epsilon(1e-12));
    }
}

TEST_CASE("hermiticity of the matvec: <u|Hv> = <Hu|v>") {
    const ModelParams p(1.0, 2.0, 9);
    const FockBasis basis(9, 3);
    const VectorXcd u = random_state(basis.dim(), 1), v = random_state(basis.dim(), 2);
    VectorXcd hu(basis.dim()), hv(basis.dim());
    par::apply_hamiltonian(basis, p, span_of(u), {hu.data(), static_cast<size_t>(hu.size())}, 2);
    par::apply_hamiltonian(basis, p, span_of(v), {hv.data(), static_cast<size_t>(hv.size())}, 2);
    CHECK(std::abs(u.dot(hv) - hu.dot(v)) < 1e-12);
}

TEST_CASE("matvec matches the dense matrix") {
    const ModelParams p(0.9, 1.1, 8);
    const FockBasis basis(8, 3);
    const MatrixXcd h = dense_hamiltonian(p, basis);
    const VectorXcd v = random_state(basis.dim(), 5);
    VectorXcd out(basis.dim());
    par::apply_hamiltonian(basis, p, span_of(v), {out.data(), static_cast<size_t>(out.size())}, 2);
    CHECK((out - h * v).norm() < 1e-12);
}

TEST_CASE("real-amplitude states carry zero current") {
    const FockBasis basis(8, 4);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    VectorXcd v(basis.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(rng);
    v.normalize();
    CHECK(std::abs(serial::half_current(basis, 1.0, span_of(v))) < 1e-12);
}
