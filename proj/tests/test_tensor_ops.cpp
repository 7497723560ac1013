#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsk/fft.hpp"
#include "tsk/reference.hpp"
#include "tsk/tensor_ops.hpp"
#include "test_util.hpp"

using namespace tsk;
using test::max_rel_err;

TEST_CASE("kron_vec definition cases") {
    CHECK(kron_vec(DenseVector{1, 2}, DenseVector{3, 4}) == DenseVector{3, 4, 6, 8});
    CHECK(kron_vec(DenseVector{1, 0}, DenseVector{0, 1}) == DenseVector{0, 1, 0, 0});

    RngStream rng(7, 0);
    DenseVector x = test::random_vector(rng, 5);
    CHECK(kron_vec(x, DenseVector{1.0}) == x);
    CHECK(kron_vec(DenseVector{1.0}, x) == x);
}

TEST_CASE("kron_vec flat index convention") {
    DenseVector x{2, 3}, y{5, 7, 11};
    DenseVector k = kron_vec(x, y);
    for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t i2 = 0; i2 < 3; ++i2) CHECK(k[i1 * 3 + i2] == x[i1] * y[i2]);
}

TEST_CASE("kron_mat identity scaling and Hadamard recursion") {
    DenseMatrix five(1, 1);
    five(0, 0) = 5.0;
    DenseMatrix got = kron_mat(DenseMatrix::identity(2), five);
    CHECK(got.data == std::vector<double>{5, 0, 0, 5});

    DenseMatrix h2(2, 2);
    h2.data = {1, 1, 1, -1};
    DenseMatrix h4 = kron_mat(h2, h2);
    CHECK(h4.data == std::vector<double>{1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1});
}

TEST_CASE("mixed product property (A x B)(C x D) = AC x BD") {
    RngStream rng(11, 0);
    for (int rep = 0; rep < 50; ++rep) {
        DenseMatrix a = test::random_matrix(rng, 3, 2);
        DenseMatrix b = test::random_matrix(rng, 2, 4);
        DenseMatrix c = test::random_matrix(rng, 2, 3);
        DenseMatrix d = test::random_matrix(rng, 4, 2);
        DenseMatrix lhs = [&] {
            DenseMatrix kl = kron_mat(a, b);
            DenseMatrix kr = kron_mat(c, d);
            DenseMatrix out(kl.rows, kr.cols);
            for (std::size_t i = 0; i < kl.rows; ++i)
                for (std::size_t k = 0; k < kl.cols; ++k)
                    for (std::size_t j = 0; j < kr.cols; ++j)
                        out(i, j) += kl(i, k) * kr(k, j);
            return out;
        }();
        DenseMatrix ac(a.rows, c.cols), bd(b.rows, d.cols);
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t k = 0; k < a.cols; ++k)
                for (std::size_t j = 0; j < c.cols; ++j) ac(i, j) += a(i, k) * c(k, j);
        for (std::size_t i = 0; i < b.rows; ++i)
            for (std::size_t k = 0; k < b.cols; ++k)
                for (std::size_t j = 0; j < d.cols; ++j) bd(i, j) += b(i, k) * d(k, j);
        DenseMatrix rhs = kron_mat(ac, bd);

        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < lhs.data.size(); ++i) {
            num += (lhs.data[i] - rhs.data[i]) * (lhs.data[i] - rhs.data[i]);
            den += rhs.data[i] * rhs.data[i];
        }
        CHECK(std::sqrt(num) <= 1e-12 * std::sqrt(den));
    }
}

TEST_CASE("mixed product on vectors (A x B)(x x y) = Ax x By") {
    RngStream rng(13, 0);
    for (int rep = 0; rep < 50; ++rep) {
        DenseMatrix a = test::random_matrix(rng, 2, 2);
        DenseMatrix b = test::random_matrix(rng, 2, 2);
        DenseVector x = test::random_vector(rng, 2);
        DenseVector y = test::random_vector(rng, 2);
        DenseVector lhs = ref::matvec(kron_mat(a, b), kron_vec(x, y));
        DenseVector rhs = kron_vec(ref::matvec(a, x), ref::matvec(b, y));
        CHECK(max_rel_err(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("inner product factorization <x(x)y, z(x)t> = <x,z><y,t>") {
    RngStream rng(17, 0);
    for (std::size_t d : {2u, 8u, 32u}) {
        for (int rep = 0; rep < 20; ++rep) {
            DenseVector x = test::random_unit_vector(rng, d);
            DenseVector y = test::random_unit_vector(rng, d);
            DenseVector z = test::random_unit_vector(rng, d);
            DenseVector t = test::random_unit_vector(rng, d);
            double lhs = dot(kron_vec(x, y), kron_vec(z, t));
            double rhs = dot(x, z) * dot(y, t);
            CHECK(std::fabs(lhs - rhs) <= 1e-12);
        }
    }
}

TEST_CASE("hadamard product") {
    CHECK(hadamard_prod(DenseVector{1, 2, 3}, DenseVector{4, 5, 6}) == DenseVector{4, 10, 18});
    RngStream rng(19, 0);
    DenseVector x = test::random_vector(rng, 9);
    CHECK(hadamard_prod(x, DenseVector(9, 1.0)) == x);
    CHECK(hadamard_prod(x, DenseVector(9, 0.0)) == DenseVector(9, 0.0));
    CHECK_THROWS_AS(hadamard_prod(x, DenseVector(8, 1.0)), ShapeError);
}

TEST_CASE("direct sum") {
    CHECK(direct_sum(DenseVector{1, 2}, DenseVector{3}) == DenseVector{1, 2, 3});
    RngStream rng(23, 0);
    DenseVector x = test::random_vector(rng, 6);
    CHECK(direct_sum(DenseVector{}, x) == x);
    for (int rep = 0; rep < 20; ++rep) {
        DenseVector a = test::random_vector(rng, 5);
        DenseVector b = test::random_vector(rng, 7);
        double lhs = norm_sq(direct_sum(a, b));
        CHECK(std::fabs(lhs - (norm_sq(a) + norm_sq(b))) <= 1e-12 * std::max(1.0, lhs));
    }
}

TEST_CASE("face split basics") {
    DenseMatrix a(1, 2), b(1, 2);
    a.data = {1, 2};
    b.data = {3, 4};
    CHECK(face_split(a, b).data == std::vector<double>{3, 4, 6, 8});

    DenseMatrix id2 = DenseMatrix::identity(2);
    CHECK(face_split(id2, id2).data == std::vector<double>{1, 0, 0, 0, 0, 0, 0, 1});

    DenseMatrix c(2, 2);
    CHECK_THROWS_AS(face_split(a, c), ShapeError);
}

TEST_CASE("face split rows equal kron of rows, same multiplications") {
    RngStream rng(29, 0);
    DenseMatrix a = test::random_matrix(rng, 4, 3);
    DenseMatrix b = test::random_matrix(rng, 4, 5);
    DenseMatrix fs = face_split(a, b);
    for (std::size_t i = 0; i < 4; ++i) {
        DenseVector row_a(a.row(i).begin(), a.row(i).end());
        DenseVector row_b(b.row(i).begin(), b.row(i).end());
        DenseVector want = kron_vec(row_a, row_b);
        for (std::size_t j = 0; j < fs.cols; ++j) CHECK(fs(i, j) == want[j]);
    }
}

TEST_CASE("face split application identity (A.B)(x(x)y) = Ax o By") {
    RngStream rng(31, 0);
    for (int rep = 0; rep < 50; ++rep) {
        DenseMatrix a = test::random_matrix(rng, 3, 4);
        DenseMatrix b = test::random_matrix(rng, 3, 2);
        DenseVector x = test::random_vector(rng, 4);
        DenseVector y = test::random_vector(rng, 2);
        DenseVector lhs = ref::matvec(face_split(a, b), kron_vec(x, y));
        DenseVector rhs = hadamard_prod(ref::matvec(a, x), ref::matvec(b, y));
        CHECK(max_rel_err(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("fwht hand cases") {
    CHECK(fwht_inplace(DenseVector{1, 0, 0, 0}) == DenseVector{1, 1, 1, 1});
    CHECK(fwht_inplace(DenseVector{1, 2}) == DenseVector{3, -1});
    CHECK_THROWS_AS(fwht_inplace(DenseVector{1, 2, 3}), ShapeError);
}

TEST_CASE("fwht involution: H(Hx) = d x") {
    RngStream rng(37, 0);
    for (std::size_t d : {2u, 8u, 64u}) {
        DenseVector x = test::random_vector(rng, d);
        DenseVector twice = fwht_inplace(fwht_inplace(x));
        for (std::size_t i = 0; i < d; ++i)
            CHECK(std::fabs(twice[i] - static_cast<double>(d) * x[i]) <= 1e-12 * d);
    }
}

TEST_CASE("fwht linearity") {
    RngStream rng(41, 0);
    DenseVector x = test::random_vector(rng, 16);
    DenseVector y = test::random_vector(rng, 16);
    double alpha = 0.7, beta = -1.3;
    DenseVector combo(16);
    for (std::size_t i = 0; i < 16; ++i) combo[i] = alpha * x[i] + beta * y[i];
    DenseVector lhs = fwht_inplace(combo);
    DenseVector hx = fwht_inplace(x), hy = fwht_inplace(y);
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(std::fabs(lhs[i] - (alpha * hx[i] + beta * hy[i])) <= 1e-12 * 64);
}

TEST_CASE("fwht equals naive Hadamard product, exactly on integer inputs") {
    RngStream rng(43, 0);
    for (std::size_t d : {2u, 16u, 256u, 1024u}) {
        DenseVector x = test::random_integer_vector(rng, d);
        DenseVector fast = fwht_inplace(x);
        DenseVector naive = ref::hadamard_naive(x);
        CHECK(fast == naive);  // all partial sums exact
    }
}

TEST_CASE("fwht equals naive Hadamard within 1e-12 on general inputs") {
    RngStream rng(47, 0);
    for (std::size_t d : {4u, 64u, 1024u}) {
        for (int rep = 0; rep < (d > 256 ? 3 : 10); ++rep) {
            DenseVector x = test::random_vector(rng, d);
            DenseVector fast = fwht_inplace(x);
            DenseVector naive = ref::hadamard_naive(x);
            CHECK(max_rel_err(fast, naive) <= 1e-12);
        }
    }
}

TEST_CASE("circular convolution hand cases") {
    RngStream rng(53, 0);
    DenseVector v = test::random_vector(rng, 8);
    DenseVector delta(8, 0.0);
    delta[0] = 1.0;
    CHECK(max_rel_err(circular_convolve(delta, v), v) <= 1e-12);

    DenseVector got = circular_convolve(DenseVector{0, 1}, DenseVector{0, 1});
    CHECK(std::fabs(got[0] - 1.0) <= 1e-12);
    CHECK(std::fabs(got[1]) <= 1e-12);

    CHECK_THROWS_AS(circular_convolve(DenseVector{1, 2}, DenseVector{1, 2, 3, 4}), ShapeError);
    CHECK_THROWS_AS(circular_convolve(DenseVector{1, 2, 3}, DenseVector{1, 2, 3}), ShapeError);
}

TEST_CASE("circular convolution matches the quadratic sum up to m=256") {
    RngStream rng(59, 0);
    for (std::size_t m : {8u, 32u, 256u}) {
        for (int rep = 0; rep < 10; ++rep) {
            DenseVector x = test::random_vector(rng, m);
            DenseVector y = test::random_vector(rng, m);
            DenseVector fast = circular_convolve(x, y);
            DenseVector naive = ref::convolve_naive(x, y);
            CHECK(max_rel_err(fast, naive) <= 1e-10);
        }
    }
}

TEST_CASE("kron_vec size overflow raises size error") {
    DenseVector big(std::size_t{1} << 20, 0.0);
    // Building the full product would need 2^40 entries of bookkeeping; the
    // guard triggers on the size_t overflow path with absurd dims instead.
    std::vector<std::size_t> dims{std::size_t{1} << 40, std::size_t{1} << 40};
    CHECK_THROWS_AS(checked_dim_product(dims), SizeError);
}
