#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>

#include "surfimp/errors.hpp"
#include "surfimp/profile.hpp"

using namespace surfimp;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Profile cosine_profile(double wavelength, double amplitude, std::size_t periods, std::size_t per_period,
                       double phase = 0.0) {
  const double dx = wavelength / static_cast<double>(per_period);
  const std::size_t n = periods * per_period;
  Grid1D g(0.0, dx, n);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = amplitude * std::cos(2.0 * std::numbers::pi * g.point(i) / wavelength + phase);
  return Profile::all_valid(g, z);
}

}  // namespace

TEST(Grid, LastPointOfLongGrid) {
  const auto g = make_grid(0.0, 5e-4, 8000);
  EXPECT_NEAR(g.point(7999), 3.9995, 1e-12);
  EXPECT_EQ(g.size(), 8000u);
}

TEST(Grid, SinglePoint) {
  const auto g = make_grid(0.0, 1.0, 1);
  ASSERT_EQ(g.points().size(), 1u);
  EXPECT_EQ(g.point(0), 0.0);
}

TEST(Grid, OffsetGrid) {
  const auto xs = make_grid(2.0, 0.5, 3).points();
  EXPECT_EQ(xs, (std::vector<double>{2.0, 2.5, 3.0}));
}

TEST(Grid, RejectsBadArguments) {
  EXPECT_THROW(make_grid(0.0, 0.0, 3), InvalidArgument);
  EXPECT_THROW(make_grid(0.0, -1.0, 3), InvalidArgument);
  EXPECT_THROW(make_grid(0.0, 1.0, 0), InvalidArgument);
}

TEST(Grid, NoDriftAlongLongGrid) {
  const Grid1D g(0.123, 1e-4, 100000);
  for (std::size_t i = 0; i < g.size(); i += 997) {
    const double exact = 0.123 + static_cast<double>(i) * 1e-4;
    EXPECT_LE(std::abs(g.point(i) - exact), std::abs(exact) * std::numeric_limits<double>::epsilon());
  }
}

TEST(ProfileType, RejectsLengthMismatchAndNonFiniteValid) {
  const Grid1D g(0, 1, 3);
  EXPECT_THROW(Profile(g, {1, 2}, {true, true}), InvalidArgument);
  EXPECT_THROW(Profile(g, {1, 2, 3}, {true, true}), InvalidArgument);
  EXPECT_THROW(Profile(g, {1, kNaN, 3}, {true, true, true}), InvalidArgument);
  EXPECT_NO_THROW(Profile(g, {1, kNaN, 3}, {true, false, true}));
}

TEST(SplitDataset, AllValid) {
  const auto p = Profile::all_valid(Grid1D(0, 1, 4), {1, 2, 3, 4});
  const auto ds = split_dataset(p);
  EXPECT_EQ(ds.xa.size(), 4u);
  EXPECT_TRUE(ds.xm.empty());
}

TEST(SplitDataset, OneMissing) {
  const Profile p(Grid1D(0.5, 0.25, 3), {1, kNaN, 3}, {true, false, true});
  const auto ds = split_dataset(p);
  EXPECT_EQ(ds.xa, (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(ds.za, (std::vector<double>{1, 3}));
  EXPECT_EQ(ds.xm, (std::vector<double>{0.75}));
}

TEST(SplitDataset, TableSizes) {
  const Grid1D g(0, 5e-4, 8000);
  std::vector<bool> valid(8000, true);
  for (std::size_t i = 100; i < 100 + 953; ++i) valid[i] = false;
  const Profile p(g, std::vector<double>(8000, 0.0), valid);
  EXPECT_EQ(split_dataset(p).xa.size(), 7047u);
}

TEST(SplitDataset, NoValidThrows) {
  const Profile p(Grid1D(0, 1, 2), {kNaN, kNaN}, {false, false});
  EXPECT_THROW(split_dataset(p), EmptyDatasetError);
}

TEST(SplitDataset, MergeRoundTripIsBitwise) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::bernoulli_distribution keep(0.7);
  const Grid1D g(-1.0, 0.01, 200);
  std::vector<double> z(200);
  std::vector<bool> valid(200);
  for (std::size_t i = 0; i < 200; ++i) {
    valid[i] = keep(rng) || i == 0;
    z[i] = valid[i] ? nd(rng) : kNaN;
  }
  const Profile p(g, z, valid);
  const auto ds = split_dataset(p);
  const auto back = merge_dataset(g, ds);
  EXPECT_EQ(back.valid(), p.valid());
  for (std::size_t i = 0; i < 200; ++i) {
    if (valid[i]) {
      EXPECT_EQ(std::memcmp(&back.z()[i], &p.z()[i], sizeof(double)), 0);
    }
  }
  // disjoint, increasing, union is the grid
  EXPECT_EQ(ds.xa.size() + ds.xm.size(), 200u);
  for (std::size_t k = 1; k < ds.xa.size(); ++k) EXPECT_LT(ds.xa[k - 1], ds.xa[k]);
  for (std::size_t k = 1; k < ds.xm.size(); ++k) EXPECT_LT(ds.xm[k - 1], ds.xm[k]);
}

TEST(Rq, ConstantIsZero) {
  EXPECT_EQ(rq(Profile::all_valid(Grid1D(0, 1, 5), std::vector<double>(5, 4.2))), 0.0);
}

TEST(Rq, SineAmplitude) {
  const auto p = cosine_profile(0.1, 2.5, 10, 100, 0.3);
  EXPECT_NEAR(rq(p), 2.5 / std::sqrt(2.0), 1e-12);
}

TEST(Rq, MatchesTwoPassOracle) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(3.0, 2.0);
  std::vector<double> z(100);
  for (double& v : z) v = nd(rng);
  const auto p = Profile::all_valid(Grid1D(0, 1, 100), z);
  double m = 0;
  for (double v : z) m += v;
  m /= 100;
  double s = 0;
  for (double v : z) s += (v - m) * (v - m);
  const double oracle = std::sqrt(s / 100);
  EXPECT_NEAR(rq(p), oracle, 1e-12 * oracle);
}

TEST(Rq, InvariantUnderOffset) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::vector<double> z(64), zs(64);
  for (std::size_t i = 0; i < 64; ++i) {
    z[i] = nd(rng);
    zs[i] = z[i] + 1234.5;
  }
  const double a = rq(Profile::all_valid(Grid1D(0, 1, 64), z));
  const double b = rq(Profile::all_valid(Grid1D(0, 1, 64), zs));
  EXPECT_NEAR(a, b, 1e-12 * a * 1e3);  // offset magnifies rounding of the mean
}

TEST(Rq, NoValidThrows) {
  EXPECT_THROW(rq(Profile(Grid1D(0, 1, 1), {kNaN}, {false})), EmptyDatasetError);
}

TEST(Rsm, CosineWavelength) {
  EXPECT_NEAR(rsm(cosine_profile(0.1, 1.0, 10, 64)), 0.1, 1e-9);
  EXPECT_NEAR(rsm(cosine_profile(0.01, 1.0, 10, 64)), 0.01, 1e-11);
}

TEST(Rsm, AmplitudeInvariant) {
  const double a = rsm(cosine_profile(0.1, 1.0, 12, 50, 0.4));
  const double b = rsm(cosine_profile(0.1, 37.0, 12, 50, 0.4));
  EXPECT_NEAR(a, b, 1e-12);
}

TEST(Rsm, NoisySineWithinTwoPercent) {
  auto clean = cosine_profile(0.1, 1.0, 20, 100, 0.2);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd(0.0, 0.01);
  std::vector<double> z = clean.z();
  for (double& v : z) v += nd(rng);
  const double clean_rsm = rsm(clean);
  EXPECT_NEAR(rsm(Profile::all_valid(clean.grid(), z)), clean_rsm, 0.02 * clean_rsm);
}

TEST(Rsm, TooFewElementsThrows) {
  EXPECT_THROW(rsm(cosine_profile(1.0, 1.0, 1, 50)), NoElementsError);
  EXPECT_THROW(rsm(Profile::all_valid(Grid1D(0, 1, 4), {1, 1, 1, 1})), NoElementsError);
}

TEST(GaussianFilter, ConstantUnchanged) {
  const auto p = Profile::all_valid(Grid1D(0, 0.001, 300), std::vector<double>(300, 2.5));
  const auto f = gaussian_filter(p, 0.08);
  for (double v : f.z()) EXPECT_NEAR(v, 2.5, 1e-12);
}

namespace {
double interior_amplitude(const Profile& f, std::size_t margin) {
  double m = 0;
  for (std::size_t i = margin; i + margin < f.size(); ++i) m = std::max(m, std::abs(f.z()[i]));
  return m;
}
}  // namespace

TEST(GaussianFilter, HalfTransmissionAtNestingIndex) {
  const double lc = 0.08;
  const auto p = cosine_profile(lc, 1.0, 20, 80);
  const auto f = gaussian_filter(p, lc);
  EXPECT_NEAR(interior_amplitude(f, 160), 0.5, 0.01);
}

TEST(GaussianFilter, LongWavelengthPasses) {
  const double lc = 0.008;
  const auto p = cosine_profile(100 * lc, 1.0, 2, 2000);
  const auto f = gaussian_filter(p, lc);
  EXPECT_GT(interior_amplitude(f, 100), 0.999);
}

TEST(GaussianFilter, MatchesDirectConvolutionOracle) {
  const double dx = 0.002, lc = 0.05;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<double> z(150);
  for (double& v : z) v = nd(rng);
  const auto p = Profile::all_valid(Grid1D(0, dx, 150), z);
  const auto f = gaussian_filter(p, lc);
  const double alpha = std::sqrt(std::log(2.0) / std::numbers::pi);
  for (std::size_t i : {0u, 10u, 75u, 149u}) {
    double num = 0, den = 0;
    for (std::size_t j = 0; j < 150; ++j) {
      const double d = (static_cast<double>(i) - static_cast<double>(j)) * dx;
      if (std::abs(d) > lc + 1e-12) continue;
      const double w = std::exp(-std::numbers::pi * std::pow(d / (alpha * lc), 2));
      num += w * z[j];
      den += w;
    }
    EXPECT_NEAR(f.z()[i], num / den, 1e-12);
  }
}

TEST(GaussianFilter, CommutesWithOffset) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  std::vector<double> z(200), zs(200);
  for (std::size_t i = 0; i < 200; ++i) {
    z[i] = nd(rng);
    zs[i] = z[i] + 7.0;
  }
  const Grid1D g(0, 0.001, 200);
  const auto a = gaussian_filter(Profile::all_valid(g, z), 0.025);
  const auto b = gaussian_filter(Profile::all_valid(g, zs), 0.025);
  for (std::size_t i = 0; i < 200; ++i) EXPECT_NEAR(b.z()[i], a.z()[i] + 7.0, 1e-12);
}

TEST(GaussianFilter, RequiresImputedProfile) {
  const Profile p(Grid1D(0, 0.001, 3), {1, kNaN, 1}, {true, false, true});
  EXPECT_THROW(gaussian_filter(p, 0.01), MustImputeFirstError);
}

TEST(RemoveMean, ZeroMeanAfter) {
  const Profile p(Grid1D(0, 1, 4), {1, kNaN, 3, 5}, {true, false, true, true});
  const auto r = remove_mean(p);
  EXPECT_NEAR(valid_mean(r), 0.0, 1e-15);
  EXPECT_TRUE(std::isnan(r.z()[1]));
}
