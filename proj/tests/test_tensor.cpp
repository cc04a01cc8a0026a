#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tsvd;
using Catch::Matchers::WithinAbs;
using testing::counting_cube;

TEST_CASE("Tensor3 validates its inputs") {
    CHECK_THROWS_AS(Tensor3({2, 2, 2}, std::vector<double>(7)), ContractViolation);
    CHECK_THROWS_AS(Tensor3({0, 2, 2}, {}), ContractViolation);
    CHECK_THROWS_AS(Tensor3({1, 1, 1}, {std::nan("")}), ContractViolation);
    const Tensor3 x = counting_cube();
    CHECK(x(1, 0, 1) == 5.0);
    CHECK(x.dim(2) == 2);
}

TEST_CASE("matricize uses the cyclic column orders") {
    const Tensor3 x = counting_cube();
    Matrix m1(2, 4), m2(2, 4);
    m1 << 0, 1, 2, 3, 4, 5, 6, 7;
    m2 << 0, 4, 1, 5, 2, 6, 3, 7;
    CHECK(matricize(x, 1) == m1);
    CHECK(matricize(x, 2) == m2);

    // mode 3: column i*p2 + j
    Matrix m3(2, 4);
    m3 << 0, 2, 4, 6, 1, 3, 5, 7;
    CHECK(matricize(x, 3) == m3);

    for (int mode = 1; mode <= 3; ++mode)
        CHECK(matricize(Tensor3::zeros({2, 3, 4}), mode).isZero(0.0));
    CHECK_THROWS_AS(matricize(x, 4), ContractViolation);
}

TEST_CASE("matricize on a non-cubic tensor matches the index formulas") {
    Sampler s(RngStream{1, 1});
    const Tensor3 x = testing::random_tensor({3, 4, 5}, s);
    const Matrix m2 = matricize(x, 2), m3 = matricize(x, 3);
    REQUIRE(m2.rows() == 4);
    REQUIRE(m3.rows() == 5);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 5; ++k) {
                CHECK(m2(j, k * 3 + i) == x(i, j, k));
                CHECK(m3(k, i * 4 + j) == x(i, j, k));
            }
}

TEST_CASE("mode_product") {
    const Tensor3 x = counting_cube();
    Matrix a(1, 2);
    a << 1, 1;
    const Tensor3 y = mode_product(x, 1, a);
    CHECK(y.dims() == Dims3{1, 2, 2});
    CHECK(std::vector<double>(y.data().begin(), y.data().end()) == std::vector<double>{4, 6, 8, 10});

    for (int mode = 1; mode <= 3; ++mode) CHECK(mode_product(x, mode, Matrix::Identity(2, 2)) == x);

    Sampler s(RngStream{2, 0});
    const Matrix b = testing::random_matrix(3, 2, s);
    const Tensor3 z = mode_product(Tensor3::zeros({2, 2, 2}), 2, b);
    CHECK(z.dims() == Dims3{2, 3, 2});
    CHECK(frobenius_norm(z) == 0.0);

    try {
        mode_product(x, 3, Matrix::Identity(3, 3));
        FAIL("expected a contract violation");
    } catch (const ContractViolation& e) {
        CHECK(std::string(e.what()).find("mode 3") != std::string::npos);
    }
}

TEST_CASE("mode_product agrees with A * M_k(X) in every mode") {
    Sampler s(RngStream{3, 0});
    const Tensor3 x = testing::random_tensor({3, 4, 5}, s);
    for (int mode = 1; mode <= 3; ++mode) {
        const Matrix a = testing::random_matrix(2, static_cast<Eigen::Index>(x.dim(mode)), s);
        const Matrix lhs = matricize(mode_product(x, mode, a), mode);
        CHECK((lhs - a * matricize(x, mode)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("kronecker") {
    CHECK(kronecker(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) == Matrix::Identity(4, 4));
    Matrix a(1, 1), b(1, 2), ab(1, 2);
    a << 2;
    b << 3, 4;
    ab << 6, 8;
    CHECK(kronecker(a, b) == ab);

    Matrix c(2, 2), d(2, 2), cd(4, 4);
    c << 1, 2, 3, 4;
    d << 0, 1, 1, 0;
    cd << 0, 1, 0, 2, 1, 0, 2, 0, 0, 3, 0, 4, 3, 0, 4, 0;
    CHECK(kronecker(c, d) == cd);
}

TEST_CASE("tucker_compose") {
    const Tensor3 one({1, 1, 1}, {1.0});
    Matrix e1(2, 1);
    e1 << 1, 0;
    const Tensor3 x = tucker_compose(one, e1, e1, e1);
    CHECK(x.dims() == Dims3{2, 2, 2});
    CHECK(x(0, 0, 0) == 1.0);
    CHECK(frobenius_norm(x) == 1.0);

    Sampler s(RngStream{4, 0});
    const Tensor3 core = testing::random_tensor({2, 2, 2}, s);
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK(tucker_compose(core, i2, i2, i2) == core);

    const Matrix u1 = testing::random_matrix(3, 2, s), u2 = testing::random_matrix(3, 2, s),
                 u3 = testing::random_matrix(3, 2, s);
    const Tensor3 ref = mode_product(mode_product(mode_product(core, 1, u1), 2, u2), 3, u3);
    CHECK(testing::max_abs_diff(tucker_compose(core, u1, u2, u3), ref) < 1e-12);

    CHECK_THROWS_AS(tucker_compose(core, testing::random_matrix(3, 3, s), u2, u3), ContractViolation);
}

TEST_CASE("frobenius_norm") {
    CHECK(frobenius_norm(Tensor3::zeros({2, 3, 4})) == 0.0);
    std::vector<double> v(8, 0.0);
    v[5] = 3.0;
    CHECK(frobenius_norm(Tensor3({2, 2, 2}, v)) == 3.0);
    CHECK_THAT(frobenius_norm(Tensor3({2, 2, 2}, std::vector<double>(8, 1.0))),
               WithinAbs(2.8284271247461903, 1e-15));
}

TEST_CASE("subtensor") {
    const Tensor3 x = counting_cube();
    CHECK(subtensor(x, {IndexRange{0, 2}, IndexRange{0, 2}, IndexRange{0, 2}}) == x);
    const Tensor3 slice = subtensor(x, {IndexRange{0, 1}, IndexRange{0, 2}, IndexRange{0, 2}});
    CHECK(std::vector<double>(slice.data().begin(), slice.data().end()) ==
          std::vector<double>{0, 1, 2, 3});
    const Tensor3 corner = subtensor(x, {IndexRange{1, 2}, IndexRange{1, 2}, IndexRange{1, 2}});
    CHECK(corner.size() == 1);
    CHECK(corner(0, 0, 0) == 7.0);
    CHECK_THROWS_AS(subtensor(x, {IndexRange{0, 3}, IndexRange{0, 2}, IndexRange{0, 2}}),
                    ContractViolation);
    CHECK_THROWS_AS(subtensor(x, {IndexRange{1, 1}, IndexRange{0, 2}, IndexRange{0, 2}}),
                    ContractViolation);
}

TEST_CASE("tensor-algebra identities on random small tensors") {
    Sampler s(RngStream{5, 0});
    for (int trial = 0; trial < 50; ++trial) {
        const Dims3 d{1 + s.below(4), 1 + s.below(4), 1 + s.below(4)};
        const Tensor3 x = testing::random_tensor(d, s);

        // M_k(X x_{k+1} A^T x_{k+2} B^T) = M_k(X) (A kron B), cyclic pairing.
        for (int k = 1; k <= 3; ++k) {
            const int k1 = k % 3 + 1, k2 = (k + 1) % 3 + 1;
            const Matrix a = testing::random_matrix(static_cast<Eigen::Index>(x.dim(k1)), 2, s);
            const Matrix b = testing::random_matrix(static_cast<Eigen::Index>(x.dim(k2)), 3, s);
            const Tensor3 lhs = mode_product(mode_product(x, k1, a.transpose()), k2, b.transpose());
            const Matrix rhs = matricize(x, k) * kronecker(a, b);
            CHECK((matricize(lhs, k) - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }

        for (int k = 1; k <= 3; ++k)
            CHECK(std::abs(matricize(x, k).norm() - frobenius_norm(x)) < 1e-12);

        const Matrix u1 = testing::random_matrix(static_cast<Eigen::Index>(d[0]), 2, s);
        const Matrix u2 = testing::random_matrix(static_cast<Eigen::Index>(d[1]), 2, s);
        const Matrix u3 = testing::random_matrix(static_cast<Eigen::Index>(d[2]), 2, s);
        const Tensor3 core = testing::random_tensor({2, 2, 2}, s);
        const Tensor3 a = mode_product(mode_product(mode_product(core, 2, u2), 3, u3), 1, u1);
        const Tensor3 b = mode_product(mode_product(mode_product(core, 1, u1), 3, u3), 2, u2);
        CHECK(testing::max_abs_diff(a, b) < 1e-12);
        CHECK(testing::max_abs_diff(a, tucker_compose(core, u1, u2, u3)) < 1e-12);
    }
}

TEST_CASE("add and subtract are elementwise and shape checked") {
    const Tensor3 x = counting_cube();
    CHECK(frobenius_norm(subtract(x, x)) == 0.0);
    CHECK(add(x, x)(1, 1, 1) == 14.0);
    CHECK_THROWS_AS(add(x, Tensor3::zeros({2, 2, 3})), ContractViolation);
}
