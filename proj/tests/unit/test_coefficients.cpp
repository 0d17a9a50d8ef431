#include <doctest.h>

#include <cmath>

#include "ihop/attack/coefficients.hpp"
#include "ihop/lap/lap.hpp"
#include "oracles.hpp"

using namespace ihop;
using namespace ihop::attack;

namespace {

const std::vector<std::size_t> k01{0, 1};
const std::vector<std::size_t> k012{0, 1, 2};

std::vector<std::size_t> argmin_map(const Matrix& c) { return lap::solve_lap_min(c).col_to_row; }

}  // namespace

TEST_CASE("volume linear term") {
  SUBCASE("worked value") {
    Matrix V(1, 1), Vt(1, 1);
    V << 0.3;
    Vt << 0.2;
    const VolumeCoefficients c(V, Vt, 10);
    CHECK(c.full_linear_costs()(0, 0) == doctest::Approx(6.390).epsilon(1e-3));
    CHECK(c.full_linear_costs()(0, 0) == doctest::Approx(-10 * (0.3 * std::log(0.2) + 0.7 * std::log(0.8))));
  }
  SUBCASE("never-matching token") {
    Matrix V = Matrix::Zero(2, 2);
    Matrix Vt(2, 2);
    Vt << 0.3, 0.1, 0.1, 0.6;
    const VolumeCoefficients c(V, Vt, 7);
    CHECK(c.full_linear_costs()(1, 0) == doctest::Approx(-7 * std::log(0.4)));
  }
  SUBCASE("uninformative keyword") {
    Matrix V(2, 2), Vt(2, 2);
    V << 0.9, 0.1, 0.1, 0.2;
    Vt << 0.5, 0.2, 0.2, 0.3;
    const VolumeCoefficients c(V, Vt, 12);
    CHECK(c.full_linear_costs()(0, 0) == doctest::Approx(12 * std::log(2.0)));
    CHECK(c.full_linear_costs()(0, 1) == doctest::Approx(12 * std::log(2.0)));
  }
  SUBCASE("negated complement flips the miss term") {
    Matrix V(1, 1), Vt(1, 1);
    V << 0.3;
    Vt << 0.2;
    const VolumeCoefficients c(V, Vt, 10, VolumeSign::NegatedComplement);
    CHECK(c.full_linear_costs()(0, 0) == doctest::Approx(-10 * (0.3 * std::log(0.2) - 0.7 * std::log(0.8))));
  }
  SUBCASE("aux outside (0,1)") {
    Matrix V = Matrix::Constant(2, 2, 0.5);
    CHECK_THROWS_AS(VolumeCoefficients(V, Matrix::Constant(2, 2, 1.0), 5), std::invalid_argument);
    CHECK_THROWS_AS(VolumeCoefficients(V, Matrix::Zero(2, 2), 5), std::invalid_argument);
  }
}

TEST_CASE("volume quadratic term") {
  Rng rng(3);
  const Matrix V = oracle::random_sym_volume(4, 20, rng);
  const Matrix Vt = oracle::random_sym_prob(5, rng);
  const VolumeCoefficients c(V, Vt, 20);

  SUBCASE("single fixed pair matches the scalar formula") {
    const std::vector<FixedPair> fixed{{2, 4}};
    const std::vector<Keyword> kws{0, 1, 3};
    const std::vector<Token> toks{0, 1, 3};
    const Matrix C = c.fixed_pair_costs(kws, toks, fixed);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        const double v = V(toks[b], 2), p = Vt(kws[a], 4);
        CHECK(C(a, b) == doctest::Approx(-20 * (v * std::log(p) + (1 - v) * std::log(1 - p))));
      }
  }
  SUBCASE("symmetric under swapping the roles of the two pairs") {
    const std::vector<FixedPair> f1{{1, 3}};
    const std::vector<FixedPair> f2{{0, 2}};
    const std::vector<Keyword> i1{2};
    const std::vector<Token> j1{0};
    const std::vector<Keyword> i2{3};
    const std::vector<Token> j2{1};
    CHECK(c.fixed_pair_costs(i1, j1, f1)(0, 0) == doctest::Approx(c.fixed_pair_costs(i2, j2, f2)(0, 0)));
  }
  SUBCASE("flat off-diagonal leaves the linear argmin unchanged") {
    Matrix flat = Matrix::Constant(5, 5, 0.5);
    flat.diagonal() = Vt.diagonal();
    const VolumeCoefficients cf(V, flat, 20);
    const std::vector<FixedPair> fixed{{3, 1}};
    const std::vector<Keyword> kws{0, 2, 3, 4};
    const std::vector<Token> toks{0, 1, 2};
    const Matrix lin = cf.linear_costs(kws, toks);
    CHECK(argmin_map(lin + cf.fixed_pair_costs(kws, toks, fixed)) == argmin_map(lin));
  }
  SUBCASE("no fixed pairs") {
    CHECK(c.fixed_pair_costs(k01, k01, {}) == Matrix::Zero(2, 2));
  }
}

TEST_CASE("frequency term") {
  Vector f(2), ft(2);
  f << 0.1, 0.0;
  ft << 0.05, 0.95;
  const FrequencyCoefficients c(f, ft, 100);
  const Matrix d = c.linear_costs(k01, k01);
  CHECK(d(0, 0) == doctest::Approx(29.957).epsilon(1e-4));
  CHECK(d.col(1).isZero());

  const FrequencyCoefficients twice(f, ft, 200);
  CHECK(twice.linear_costs(k01, k01).isApprox(2 * d));

  Rng rng(8);
  Vector g(5), gt(5);
  for (int i = 0; i < 5; ++i) {
    g(i) = oracle::unif(rng, 0, 1);
    gt(i) = oracle::unif(rng, 0.1, 1);
  }
  g /= g.sum();
  gt /= gt.sum();
  const std::vector<std::size_t> all{0, 1, 2, 3, 4};
  CHECK(argmin_map(FrequencyCoefficients(g, gt, 50).linear_costs(all, all)) ==
        argmin_map(FrequencyCoefficients(g, gt, 100).linear_costs(all, all)));
  CHECK(c.fixed_pair_costs(k01, k01, std::vector<FixedPair>{{0, 0}}).isZero());
  CHECK_THROWS(FrequencyCoefficients(f, Vector::Zero(2), 100));
}

TEST_CASE("free aggregate") {
  SUBCASE("symmetric pair") {
    Matrix F(2, 2);
    F << 0, 1, 1, 0;
    const auto agg = markov_free_aggregate(F, Vector::Constant(2, 5), k01);
    CHECK(agg.share(0) == doctest::Approx(0.5));
    CHECK(agg.share(1) == doctest::Approx(0.5));
    CHECK(agg.rho_circ(0) == 5);
  }
  SUBCASE("single free state") {
    const Matrix F = Matrix::Constant(3, 3, 1.0 / 3);
    const std::vector<std::size_t> one{1};
    const auto agg = markov_free_aggregate(F, Vector::Constant(3, 4), one);
    CHECK(agg.share(0) == 0.0);
    CHECK(agg.rho_circ(0) == 0.0);
    CHECK(markov_free_aggregate(F, Vector::Constant(3, 4), one, RhoCircMode::Pooled).rho_circ(0) == 4.0);
  }
  SUBCASE("normalization") {
    Rng rng(21);
    for (int t = 0; t < 20; ++t) {
      const Matrix F = oracle::random_column_stochastic(7, rng);
      Vector w(7);
      for (int i = 0; i < 7; ++i) w(i) = oracle::unif(rng, 1, 50);
      const auto free = sample_without_replacement(7, 4, rng);
      const auto agg = markov_free_aggregate(F, w, free);
      CHECK(std::abs(agg.share.sum() - 1.0) < 1e-12);
      const Vector shares = oracle::free_shares(F, w, free);
      CHECK((agg.share - shares).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("markov linear term") {
  SUBCASE("no self transitions and one free token") {
    Matrix F(2, 2);
    F << 0, 1, 1, 0;
    const MarkovCoefficients c(F, Vector::Constant(2, 3), Matrix::Constant(2, 2, 0.5), Vector::Constant(2, 0.5));
    const std::vector<std::size_t> one{0};
    CHECK(c.linear_costs(one, one)(0, 0) == 0.0);
  }
  SUBCASE("hand-computed three-token instance") {
    Matrix F(3, 3);
    F << 0.5, 0.2, 0.0,
         0.25, 0.4, 0.5,
         0.25, 0.4, 0.5;
    Vector counts(3);
    counts << 4, 5, 2;
    Matrix Ft(3, 3);
    Ft << 0.6, 0.2, 0.3,
          0.3, 0.5, 0.3,
          0.1, 0.3, 0.4;
    Vector w(3);
    w << 0.5, 0.3, 0.2;
    const MarkovCoefficients c(F, counts, Ft, w);
    const Matrix d = c.linear_costs(k012, k012);
    // Token side: incoming weight 0->{5*0.2 + 2*0}=1, 1->{4*0.25 + 2*0.5}=2, 2->{4*0.25 + 5*0.4}=3.
    // Keyword side: 0->{0.3*0.2 + 0.2*0.3}=0.12, 1->{0.5*0.3 + 0.2*0.3}=0.21, 2->{0.5*0.1 + 0.3*0.3}=0.14.
    const double tok_share[3] = {1.0 / 6, 2.0 / 6, 3.0 / 6};
    const double rho_circ[3] = {7, 6, 9};
    const double kw_share[3] = {0.12 / 0.47, 0.21 / 0.47, 0.14 / 0.47};
    const double self[3] = {4 * 0.5, 5 * 0.4, 2 * 0.5};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(d(i, j) == doctest::Approx(-(self[j] * std::log(Ft(i, i)) +
                                           rho_circ[j] * tok_share[j] * std::log(kw_share[i]))));
    const MarkovCoefficients scaled(F, 3 * counts, Ft, w);
    CHECK(scaled.linear_costs(k012, k012).isApprox(3 * d));
  }
}

TEST_CASE("markov quadratic term") {
  Rng rng(4);
  const Matrix F = oracle::random_observed_chain(5, 20, rng);
  Vector counts(5);
  counts << 3, 8, 1, 6, 4;
  const Matrix Ft = oracle::random_column_stochastic(5, rng);
  const Vector w = stationary_distribution(Ft);
  const MarkovCoefficients c(F, counts, Ft, w);

  SUBCASE("single fixed pair matches the scalar formula") {
    const std::vector<FixedPair> fixed{{4, 0}};
    const std::vector<Keyword> kws{1, 2, 3, 4};
    const std::vector<Token> toks{0, 1, 2, 3};
    const Matrix C = c.fixed_pair_costs(kws, toks, fixed);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) {
        const auto i = static_cast<Eigen::Index>(kws[a]);
        const auto j = static_cast<Eigen::Index>(toks[b]);
        const double want = -(counts(4) * F(j, 4) * std::log(Ft(i, 0)) + counts(j) * F(4, j) * std::log(Ft(0, i)));
        CHECK(C(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) == doctest::Approx(want));
      }
  }
  SUBCASE("uniform aux chain leaves the linear argmin unchanged") {
    const Matrix U = Matrix::Constant(5, 5, 0.2);
    Matrix Fu = U;
    Fu.diagonal() << 0.2, 0.2, 0.2, 0.2, 0.2;
    const MarkovCoefficients cu(F, counts, Fu, Vector::Constant(5, 0.2));
    const std::vector<FixedPair> fixed{{1, 2}, {3, 0}};
    const std::vector<Keyword> kws{1, 3, 4};
    const std::vector<Token> toks{0, 2, 4};
    const Matrix lin = cu.linear_costs(kws, toks);
    const Matrix quad = cu.fixed_pair_costs(kws, toks, fixed);
    for (Eigen::Index b = 0; b < 3; ++b) CHECK((quad.col(b).array() - quad(0, b)).abs().maxCoeff() < 1e-12);
    CHECK(argmin_map(lin + quad) == argmin_map(lin));
  }
  SUBCASE("no transitions between free and fixed tokens") {
    Matrix blocks = Matrix::Zero(4, 4);
    blocks.topLeftCorner(2, 2) = Matrix::Constant(2, 2, 0.5);
    blocks.bottomRightCorner(2, 2) = Matrix::Constant(2, 2, 0.5);
    const Matrix Ft4 = Matrix::Constant(4, 4, 0.25);
    const MarkovCoefficients cb(blocks, Vector::Constant(4, 2), Ft4, Vector::Constant(4, 0.25));
    const std::vector<FixedPair> fixed{{2, 2}, {3, 3}};
    CHECK(cb.fixed_pair_costs(k01, k01, fixed).isZero());
  }
}

TEST_CASE("combinators") {
  Rng rng(6);
  const Matrix V = oracle::random_sym_volume(3, 10, rng);
  const Matrix Vt = oracle::random_sym_prob(3, rng);
  Vector f(3), ft(3);
  f << 0.5, 0.3, 0.2;
  ft << 0.2, 0.3, 0.5;
  auto vol = std::make_shared<VolumeCoefficients>(V, Vt, 10);
  auto freq = std::make_shared<FrequencyCoefficients>(f, ft, 40);
  const std::vector<FixedPair> fixed{{2, 1}};
  const std::vector<std::size_t> free{0, 2};

  const auto zero = std::make_shared<ZeroCoefficients>(3, 3);
  const auto with_zero = combine_additive({vol, zero});
  CHECK(with_zero->linear_costs(free, free) == vol->linear_costs(free, free));
  CHECK(with_zero->fixed_pair_costs(free, free, fixed) == vol->fixed_pair_costs(free, free, fixed));

  const auto sum = combine_additive({vol, freq});
  const auto rev = combine_additive({freq, vol});
  CHECK(sum->linear_costs(free, free).isApprox(vol->linear_costs(free, free) + freq->linear_costs(free, free)));
  CHECK(sum->fixed_pair_costs(free, free, fixed).isApprox(vol->fixed_pair_costs(free, free, fixed)));
  CHECK(rev->linear_costs(free, free).isApprox(sum->linear_costs(free, free)));

  const ScaledCoefficients half(vol, 0.5);
  CHECK(half.linear_costs(free, free).isApprox(0.5 * vol->linear_costs(free, free)));
  const LinearOnlyCoefficients lin(vol);
  CHECK(lin.fixed_pair_costs(free, free, fixed).isZero());
  CHECK(combine_additive({vol}) == vol);
  CHECK_THROWS(AdditiveCoefficients({vol, std::make_shared<ZeroCoefficients>(4, 3)}));
  CHECK_THROWS(ScaledCoefficients(vol, 0.0));
}

TEST_CASE("brute-force likelihood oracles") {
  Rng rng(99);
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    CHECK(oracle::check_volume_linear(rng).agree);
    CHECK(oracle::check_volume_quadratic(rng).agree);
    CHECK(oracle::check_freq(rng).agree);
    CHECK(oracle::check_markov_linear(rng).agree);
    CHECK(oracle::check_markov_quadratic(rng).agree);
  }
}
