#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace tsvd;

TEST_CASE("t3 round trip is exact") {
    Sampler s(RngStream{1, 0});
    const Tensor3 x = testing::random_tensor({3, 4, 2}, s);
    std::stringstream ss;
    io::write_t3(ss, x);
    CHECK(io::read_t3(ss) == x);
}

TEST_CASE("t3 layout is rows of the mode-1 unfolding") {
    std::ostringstream os;
    io::write_t3(os, testing::counting_cube());
    CHECK(os.str() == "t3 2 2 2\n0 1 2 3\n4 5 6 7\n");
}

TEST_CASE("mat round trip is exact") {
    Sampler s(RngStream{2, 0});
    const Matrix m = testing::random_matrix(4, 3, s);
    std::stringstream ss;
    io::write_mat(ss, m);
    CHECK(io::read_mat(ss) == m);
}

TEST_CASE("malformed files are rejected") {
    for (const char* bad : {"t3 2 2 2\n0 1 2 3\n4 5 6\n", "t3 2 2 2\n0 1 2 3 4 5 6 7 8\n",
                            "t3 2 0 2\n", "mat 2 2\n1 2 3 4\n", "t3 1 1 1\nnan\n",
                            "t3 1 1 x\n1\n"}) {
        std::istringstream in(bad);
        CHECK_THROWS_AS(io::read_t3(in), ContractViolation);
    }
    for (const char* bad : {"mat 2 2\n1 2 3\n", "t3 1 1 1\n1\n", "mat 1 1\ninf\n"}) {
        std::istringstream in(bad);
        CHECK_THROWS_AS(io::read_mat(in), ContractViolation);
    }
    CHECK_THROWS_AS(io::load_t3("/nonexistent/x.t3"), ContractViolation);
}
