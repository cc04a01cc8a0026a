#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace tsvd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("RngStream reproduces and separates streams") {
    const RngStream a{7, 1};
    Sampler s1(a), s2(a), s3(RngStream{7, 2}), s4(RngStream{8, 1});
    for (int i = 0; i < 100; ++i) {
        const auto x = s1.bits();
        CHECK(x == s2.bits());
        CHECK(x != s3.bits());
        CHECK(x != s4.bits());
    }
    CHECK(a.derive(Role::noise) == a.derive(Role::noise));
    CHECK(a.derive(Role::noise) != a.derive(Role::core));
    CHECK(a.derive(Role::factors, 1) != a.derive(Role::factors, 2));

    std::set<std::uint64_t> ids;
    for (std::uint64_t c = 0; c < 20; ++c)
        for (std::uint64_t r = 0; r < 50; ++r)
            ids.insert(RngStream::for_replication(2017, c, r).stream_id);
    CHECK(ids.size() == 1000);
}

TEST_CASE("Sampler marginals") {
    Sampler s(RngStream{1, 0});
    const int n = 200000;
    double sum = 0, sq = 0, usum = 0;
    std::array<int, 7> counts{};
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        sum += z;
        sq += z * z;
        const double u = s.uniform01();
        CHECK((u >= 0.0 && u < 1.0));
        usum += u;
        ++counts[s.below(7)];
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.015);
    CHECK(std::abs(usum / n - 0.5) < 0.005);
    for (int c : counts) CHECK(std::abs(c / double(n) - 1.0 / 7.0) < 0.005);
}

TEST_CASE("haar_orthonormal") {
    const OrthonormalBasis one = haar_orthonormal(1, 1, RngStream{1, 0});
    CHECK_THAT(std::abs(one.matrix()(0, 0)), WithinAbs(1.0, 1e-15));

    const OrthonormalBasis a = haar_orthonormal(30, 4, RngStream{2, 3});
    const OrthonormalBasis b = haar_orthonormal(30, 4, RngStream{2, 3});
    CHECK(a.matrix() == b.matrix());
    CHECK_THROWS_AS(haar_orthonormal(3, 4, RngStream{}), ContractViolation);
    CHECK_THROWS_AS(haar_orthonormal(3, 0, RngStream{}), ContractViolation);

    // Symmetry: E u_1 = 0 and E u_1^2 = 1/p; the second moment also checks
    // that no coordinate is favoured.
    const int reps = 2000;
    double first = 0.0, second = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        const OrthonormalBasis u = haar_orthonormal(200, 1, RngStream{3, std::uint64_t(rep)});
        first += u.matrix()(0, 0);
        second += u.matrix()(0, 0) * u.matrix()(0, 0);
    }
    CHECK(std::abs(first / reps) < 4.0 / std::sqrt(double(reps)));
    CHECK_THAT(second / reps * 200.0, WithinAbs(1.0, 0.15));
}

TEST_CASE("haar_orthonormal is invariant under a fixed rotation") {
    // Compare the law of the first coordinate of u and of Q u for a fixed
    // orthogonal Q through its second and fourth moments (1/p, 3/(p(p+2))).
    const std::size_t p = 6;
    const Matrix q = haar_orthonormal(p, p, RngStream{99, 0}).matrix();
    const int reps = 20000;
    double m2 = 0, m4 = 0, r2 = 0, r4 = 0;
    for (int rep = 0; rep < reps; ++rep) {
        const Vector u = haar_orthonormal(p, 1, RngStream{4, std::uint64_t(rep)}).matrix().col(0);
        const double a = u(0), b = (q * u)(0);
        m2 += a * a, m4 += a * a * a * a, r2 += b * b, r4 += b * b * b * b;
    }
    const double e2 = 1.0 / p, e4 = 3.0 / (p * (p + 2.0));
    CHECK_THAT(m2 / reps, WithinRel(e2, 0.05));
    CHECK_THAT(r2 / reps, WithinRel(e2, 0.05));
    CHECK_THAT(m4 / reps, WithinRel(e4, 0.08));
    CHECK_THAT(r4 / reps, WithinRel(e4, 0.08));
}

TEST_CASE("rescaled_core") {
    const Tensor3 s1 = rescaled_core({1, 1, 1}, 5.0, RngStream{1, 0});
    CHECK_THAT(std::abs(s1(0, 0, 0)), WithinAbs(5.0, 1e-12));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Tensor3 s = rescaled_core({2, 3, 4}, 10.0, RngStream{seed, 1});
        CHECK_THAT(signal_strength(s, {2, 3, 4}), WithinRel(10.0, 1e-8));
    }
    const Tensor3 s2 = rescaled_core({2, 2, 2}, 10.0, RngStream{5, 5});
    for (int mode = 1; mode <= 3; ++mode) CHECK(singular_values(matricize(s2, mode))(1) >= 10.0 - 1e-6);

    CHECK_THROWS_AS(rescaled_core({1, 1, 2}, 1.0, RngStream{}), ContractViolation);
    CHECK_THROWS_AS(rescaled_core({2, 2, 2}, 0.0, RngStream{}), ContractViolation);
}

TEST_CASE("diagonal_core") {
    const Tensor3 a = diagonal_core(1, 7.0);
    CHECK(a(0, 0, 0) == 7.0);
    const Tensor3 b = diagonal_core(3, 2.0);
    CHECK_THAT(frobenius_norm(b), WithinAbs(2.0 * std::sqrt(3.0), 1e-15));
    for (int mode = 1; mode <= 3; ++mode) {
        const Vector s = singular_values(matricize(b, mode));
        CHECK((s.array() - 2.0).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("noise_tensor") {
    const Dims3 d{50, 40, 50};
    for (const NoiseKind& kind : {NoiseKind::gaussian(), NoiseKind::uniform()}) {
        const Tensor3 z = noise_tensor(d, kind, RngStream{1, 0});
        double sum = 0, sq = 0, mx = 0;
        for (double v : z.data()) sum += v, sq += v * v, mx = std::max(mx, std::abs(v));
        const double n = double(z.size()), mean = sum / n;
        const double var = sq / n - mean * mean;
        CHECK(var >= 0.97);
        CHECK(var <= 1.03);
        if (kind.law == NoiseKind::Law::uniform) CHECK(mx <= std::sqrt(3.0));
    }
    CHECK_THROWS_AS(noise_tensor(d, NoiseKind::gaussian(0.0), RngStream{}), ContractViolation);
}

TEST_CASE("make_instance") {
    const Dims3 d{10, 12, 14};
    const Instance inst = make_instance(d, {2, 3, 2}, 20.0, CoreKind::rescaled_gaussian,
                                        NoiseKind::gaussian(), RngStream{3, 9});
    CHECK(inst.lambda_actual >= 20.0 * (1 - 1e-8));
    CHECK_THAT(signal_strength(inst.x, {2, 3, 2}), WithinRel(inst.lambda_actual, 1e-8));
    const Tensor3 z = noise_tensor(d, NoiseKind::gaussian(), RngStream{3, 9}.derive(Role::noise));
    CHECK(testing::max_abs_diff(subtract(inst.y, inst.x), z) < 1e-12);

    const Instance again = make_instance(d, {2, 3, 2}, 20.0, CoreKind::rescaled_gaussian,
                                         NoiseKind::gaussian(), RngStream{3, 9});
    CHECK(again.y == inst.y);
    CHECK(again.x == inst.x);
    CHECK(again.truth.core == inst.truth.core);

    const Instance diag = make_instance({8, 8, 8}, {3, 3, 3}, 4.0, CoreKind::diagonal,
                                        NoiseKind::uniform(), RngStream{1, 1});
    CHECK_THAT(diag.lambda_actual, WithinRel(4.0, 1e-12));

    const Instance quiet = make_instance(d, {2, 2, 2}, 5.0, CoreKind::rescaled_gaussian,
                                         NoiseKind::gaussian(1e-300), RngStream{2, 2});
    CHECK(testing::max_abs_diff(quiet.y, quiet.x) < 1e-290);

    CHECK_THROWS_AS(make_instance(d, {11, 2, 2}, 5.0, CoreKind::rescaled_gaussian,
                                  NoiseKind::gaussian(), RngStream{}),
                    ContractViolation);
    CHECK_THROWS_AS(make_instance(d, {2, 3, 2}, 5.0, CoreKind::diagonal, NoiseKind::gaussian(),
                                  RngStream{}),
                    ContractViolation);
}

TEST_CASE("strong signal instances are recovered almost exactly") {
    const Instance inst = make_instance({15, 16, 17}, {2, 2, 2}, 1e6, CoreKind::rescaled_gaussian,
                                        NoiseKind::gaussian(), RngStream{4, 4});
    HooiConfig cfg;
    cfg.ranks = {2, 2, 2};
    const HooiResult res = hooi(inst.y, cfg);
    for (int k = 0; k < 3; ++k)
        CHECK(sin_theta_norm(res.factors.bases[k], inst.truth.bases[k], kInf) <= 1e-3);
}
