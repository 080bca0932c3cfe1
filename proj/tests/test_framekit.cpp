#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "aperio/density.hpp"
#include "aperio/error.hpp"
#include "aperio/framekit.hpp"
#include "support.hpp"

using namespace aperio;
using namespace testing_support;

namespace {

constexpr double kPi = 3.14159265358979323846;

GramMatrix from(const Eigen::MatrixXcd& m) { return GramMatrix{m}; }

GramMatrix two_by_two(double r) {
  Eigen::MatrixXcd m(2, 2);
  m << 1, r, r, 1;
  return from(m);
}

// Smallest eigenvalue by the general (non-Hermitian) complex solver.
double general_min_eigenvalue(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> s(m);
  double lo = INFINITY;
  for (Eigen::Index i = 0; i < s.eigenvalues().size(); ++i) lo = std::min(lo, s.eigenvalues()[i].real());
  return lo;
}

Eigen::MatrixXcd random_low_rank(std::mt19937_64& rng, int n, int rank) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd v(n, rank);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rank; ++j) v(i, j) = Complex(g(rng), g(rng));
  }
  return v * v.adjoint();
}

PointPatch clustered(int n) {
  std::vector<Vec> pts;
  for (int k = -10; k <= 10; ++k) {
    for (int j = 0; j < n; ++j) pts.push_back({k + j / (4.0 * n * n)});
  }
  return PointPatch(Box({{-10.0, 11.0}}), pts);
}

}  // namespace

TEST(BuildGram, SincOrthonormalityOnIntegers) {
  const auto k = paley_wiener_symmetric(1, 1);
  for (double c : {1.0, 2.0}) {
    const auto g = build_gram(k, lattice_1d(c, 20));
    EXPECT_EQ(g.size(), c == 1.0 ? 41u : 21u);
    EXPECT_LT((g.entries - Eigen::MatrixXcd::Identity(g.entries.rows(), g.entries.cols())).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(BuildGram, GaborPair) {
  const double a = 0.7;
  const auto g = build_gram(gabor_gaussian(1), PointPatch(Box::centered_cube(2, 1), {{0, 0}, {a, 0}}));
  EXPECT_NEAR(std::abs(g.entries(0, 1)), std::exp(-kPi * a * a / 2), 1e-15);
  EXPECT_LT(std::abs(g.entries(0, 1) - std::conj(g.entries(1, 0))), 1e-15);
}

TEST(BuildGram, Orientation) {
  // entries(i, j) = k(λ_j, λ_i).
  const auto k = paley_wiener(Box({{0.0, 1.0}}));
  const PointPatch p(Box::centered_cube(1, 1), {{0.0}, {0.3}});
  const auto g = build_gram(k, p);
  EXPECT_LT(std::abs(g.entries(0, 1) - kernel_value(k, Vec{0.3}, Vec{0.0})), 1e-15);
}

TEST(BuildGram, OverflowAndMismatch) {
  GramOptions opt;
  opt.max_points = 10;
  try {
    build_gram(paley_wiener_symmetric(1, 1), lattice_1d(1, 20), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOverflow);
  }
  EXPECT_THROW(build_gram(gabor_gaussian(1), lattice_1d(1, 5)), Error);
}

TEST(BuildGram, ThreadedAssemblyIsIdentical) {
  std::mt19937_64 rng(2);
  const auto p = random_patch(rng, Box::centered_cube(2, 4), 120);
  GramOptions four;
  four.threads = 4;
  EXPECT_EQ(build_gram(gabor_gaussian(1), p).entries, build_gram(gabor_gaussian(1), p, four).entries);
}

TEST(RieszBounds, Examples) {
  const auto id = riesz_bounds(from(Eigen::MatrixXcd::Identity(5, 5)));
  EXPECT_DOUBLE_EQ(id.lower, 1.0);
  EXPECT_DOUBLE_EQ(id.upper, 1.0);
  const auto b = riesz_bounds(two_by_two(0.3));
  EXPECT_NEAR(b.lower, 0.7, 1e-15);
  EXPECT_NEAR(b.upper, 1.3, 1e-15);
}

TEST(RieszBounds, HalfIntegerInsideIntegerSpan) {
  std::vector<Vec> pts;
  for (int k = -20; k <= 20; ++k) pts.push_back({static_cast<double>(k)});
  pts.push_back({0.5});
  const auto g = build_gram(paley_wiener_symmetric(1, 1), PointPatch(Box::centered_cube(1, 20), pts));
  const auto b = riesz_bounds(g);
  EXPECT_LT(b.lower, 0.05);
  EXPECT_NEAR(spectrum(g).eigenvalues.front(), general_min_eigenvalue(g.entries), 1e-10);
}

TEST(SamplingBounds, OversampledHalfIntegers) {
  const auto s = sampling_bounds(paley_wiener_symmetric(1, 1), lattice_1d(0.5, 40), 10);
  EXPECT_NEAR(s.lower, 2.0, 0.05);
  EXPECT_NEAR(s.upper, 2.0, 0.05);
}

TEST(SamplingBounds, IntegersMatchRieszBounds) {
  const auto k = paley_wiener_symmetric(1, 1);
  const auto p = lattice_1d(1, 40);
  const auto s = sampling_bounds(k, p, 10);
  const auto r = riesz_bounds(build_gram(k, p));
  for (double v : {s.lower, s.upper, r.lower, r.upper}) EXPECT_NEAR(v, 1.0, 1e-6);
}

TEST(SamplingBounds, UndersampledDecays) {
  const auto k = paley_wiener_symmetric(1, 1);
  std::vector<double> raw;
  double scale = 0.0;
  for (double half : {40.0, 80.0, 160.0}) {
    const auto s = sampling_bounds(k, lattice_1d(1.25, half), half / 4);
    EXPECT_LT(s.lower, 0.1);
    raw.push_back(s.raw_lower);
    scale = std::max(scale, s.upper);
  }
  EXPECT_EQ(classify_trend(raw, scale), TrendClass::kDecaying);
}

TEST(SamplingBounds, MarginTooLarge) {
  try {
    sampling_bounds(paley_wiener_symmetric(1, 1), lattice_1d(1, 10), 11);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMarginTooLarge);
  }
}

// Rayleigh quotients of random test functions, built by frequency-domain
// quadrature rather than the closed-form taper, fall inside [A, B].
TEST(SamplingBounds, QuotientsOfRandomTestFunctionsLieInside) {
  const auto k = paley_wiener_symmetric(1, 1);
  const auto p = lattice_1d(0.8, 20);
  const auto s = sampling_bounds(k, p, 5);
  std::vector<double> centers;
  for (int j = -15; j <= 15; ++j) centers.push_back(j);
  const int nq = 4000;
  auto taper = [](double xi) { return std::pow(std::cos(kPi * xi), 4); };
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Complex> c(centers.size());
    for (auto& v : c) v = Complex(g(rng), g(rng));
    double norm = 0.0;
    std::vector<Complex> spec(nq);
    for (int q = 0; q < nq; ++q) {
      const double xi = -0.5 + (q + 0.5) / nq;
      Complex f = 0.0;
      for (std::size_t j = 0; j < centers.size(); ++j) f += c[j] * std::polar(taper(xi), -2 * kPi * xi * centers[j]);
      spec[q] = f;
      norm += std::norm(f) / nq;
    }
    double samples = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      Complex v = 0.0;
      for (int q = 0; q < nq; ++q) v += spec[q] * std::polar(1.0, 2 * kPi * (-0.5 + (q + 0.5) / nq) * p.point(i)[0]);
      samples += std::norm(v / static_cast<double>(nq));
    }
    EXPECT_GE(samples / norm, s.lower - 1e-6);
    EXPECT_LE(samples / norm, s.upper + 1e-6);
  }
}

TEST(CanonicalParseval, Examples) {
  const auto id = canonical_parseval(from(Eigen::MatrixXcd::Identity(4, 4)));
  EXPECT_LT((id.transform - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-14);
  EXPECT_LT((id.gram.entries - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-14);

  const auto two = spectrum(canonical_parseval(two_by_two(0.5)).gram);
  EXPECT_NEAR(two.eigenvalues[0], 1.0, 1e-12);
  EXPECT_NEAR(two.eigenvalues[1], 1.0, 1e-12);

  std::mt19937_64 rng(1);
  const auto r = canonical_parseval(from(random_low_rank(rng, 3, 2)));
  EXPECT_EQ(r.rank, 2u);
  const auto ev = spectrum(r.gram).eigenvalues;
  EXPECT_NEAR(ev[0], 0.0, 1e-8);
  EXPECT_NEAR(ev[1], 1.0, 1e-8);
  EXPECT_NEAR(ev[2], 1.0, 1e-8);
}

TEST(CanonicalParseval, TransformReproducesOutput) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXcd g = random_low_rank(rng, 12, 7);
  const auto r = canonical_parseval(from(g));
  EXPECT_LT((r.transform * g * r.transform - r.gram.entries).norm(), 1e-9);
}

TEST(CanonicalParseval, ZeroIsNotAFrame) {
  try {
    canonical_parseval(from(Eigen::MatrixXcd::Zero(3, 3)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotAFrame);
    EXPECT_STREQ(e.what(), "not a frame at this truncation");
  }
}

TEST(FramekitProperties, ParsevalOutputIsProjection) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    const int n = 5 + t * 3;
    const auto r = canonical_parseval(from(random_low_rank(rng, n, t % 2 ? n : n / 2)));
    const auto& p = r.gram.entries;
    EXPECT_LT((p * p - p).norm(), 1e-8);
    EXPECT_LT((p - p.adjoint()).norm(), 1e-8);
  }
}

TEST(TranslationInvariance, Examples) {
  std::mt19937_64 rng(3);
  const auto pw = paley_wiener_symmetric(1, 1);
  const auto p1 = random_patch(rng, Box::centered_cube(1, 10), 40);
  EXPECT_EQ(translation_spectrum_invariance(pw, p1, {{0.0}}), 0.0);
  EXPECT_LT(translation_spectrum_invariance(pw, p1, {{0.3}, {1.7}}), 1e-10);
  const auto p2 = random_patch(rng, Box::centered_cube(2, 4), 60);
  std::vector<Vec> shifts;
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 5; ++i) shifts.push_back({u(rng), u(rng)});
  EXPECT_LT(translation_spectrum_invariance(gabor_gaussian(1), p2, shifts), 1e-8);
}

TEST(FramekitProperties, RelabelingAndConventionInvariance) {
  std::mt19937_64 rng(7);
  const auto p = random_patch(rng, Box::centered_cube(2, 3), 50);
  auto pts = p.points();
  std::shuffle(pts.begin(), pts.end(), rng);
  const PointPatch relabeled(p.box(), pts);
  const auto tm = spectrum(build_gram(gabor_gaussian(1), p)).eigenvalues;
  EXPECT_EQ(spectrum(build_gram(gabor_gaussian(1), relabeled)).eigenvalues, tm);
  const auto mt = spectrum(build_gram(gabor_gaussian(1, CocycleKind::kMT), p)).eigenvalues;
  for (std::size_t i = 0; i < tm.size(); ++i) EXPECT_NEAR(mt[i], tm[i], 1e-8);
}

TEST(FramekitProperties, InterlacingUnderPointRemoval) {
  std::mt19937_64 rng(13);
  for (const auto& k : {paley_wiener_symmetric(1, 2), gabor_gaussian(1)}) {
    const auto p = random_patch(rng, Box::centered_cube(k.dim(), 3), 30);
    const auto full = spectrum(build_gram(k, p));
    for (int t = 0; t < 5; ++t) {
      auto pts = p.points();
      pts.erase(pts.begin() + static_cast<long>(rng() % pts.size()));
      const auto sub = spectrum(build_gram(k, PointPatch(p.box(), pts)));
      EXPECT_LE(sub.eigenvalues.back(), full.eigenvalues.back() + 1e-10);
      EXPECT_LE(sub.rank, full.rank);
      for (std::size_t i = 0; i < sub.eigenvalues.size(); ++i) {
        EXPECT_GE(sub.eigenvalues[i], full.eigenvalues[i] - 1e-10);
        EXPECT_LE(sub.eigenvalues[i], full.eigenvalues[i + 1] + 1e-10);
      }
    }
  }
}

TEST(FramekitProperties, BesselBoundGrowsWithClustering) {
  const auto k = paley_wiener_symmetric(1, 1);
  double prev = 0.0;
  for (int n : {1, 2, 4, 8, 16}) {
    const double b = riesz_bounds(build_gram(k, clustered(n))).upper;
    EXPECT_GT(b, prev);
    prev = b;
  }
}

TEST(ClassifyTrend, Cases) {
  const std::vector<double> stable = {2.0, 1.9, 2.0}, halving = {1.0, 0.4, 0.1}, to_zero = {1e-3, 1e-12, 0};
  EXPECT_EQ(classify_trend(stable, 2), TrendClass::kStable);
  EXPECT_EQ(classify_trend(halving, 2), TrendClass::kDecaying);
  EXPECT_EQ(classify_trend(to_zero, 2), TrendClass::kDecaying);
  EXPECT_EQ(classify_trend(std::vector<double>{1.0, 0.9, 0.3}, 2), TrendClass::kInconclusive);
  EXPECT_EQ(classify_trend(std::vector<double>{1.0, 1.0}, 2), TrendClass::kInconclusive);
}

TEST(FrameReport, HalfIntegersGiveFrameEvidence) {
  const auto r = frame_report(paley_wiener_symmetric(1, 1), lattice_1d(0.5, 40), {10, 20, 40});
  ASSERT_EQ(r.trend.size(), 3u);
  EXPECT_EQ(r.verdict, FrameVerdict::kFrameEvidence);
  EXPECT_EQ(r.riesz_trend, TrendClass::kDecaying);
  EXPECT_DOUBLE_EQ(r.boundary_margin, 10.0);
  EXPECT_THROW(frame_report(paley_wiener_symmetric(1, 1), lattice_1d(0.5, 40), {10, 50}), Error);
}

TEST(Verdict, PaleyWienerLandau) {
  const auto k = paley_wiener_symmetric(1, 1);
  const FolnerSpec sizes{{50, 100, 200}};
  const auto under = verdict(k, beurling_density(lattice_1d(1.25, 400), sizes), 1);
  EXPECT_FALSE(under.necessary_sampling_ok);
  EXPECT_TRUE(under.necessary_interpolation_ok);
  const auto over = verdict(k, beurling_density(lattice_1d(0.8, 400), sizes), 1);
  EXPECT_FALSE(over.necessary_interpolation_ok);
  EXPECT_TRUE(over.necessary_sampling_ok);
  EXPECT_EQ(over.ruled_out, std::vector<std::string>{"interpolation"});
  const auto crit = verdict(k, beurling_density(lattice_1d(1, 400), sizes), 1);
  EXPECT_TRUE(crit.necessary_sampling_ok && crit.necessary_interpolation_ok);
  EXPECT_TRUE(crit.ruled_out.empty());
}

TEST(Verdict, GaborCriticalLatticeIsInconclusive) {
  const auto d = beurling_density(lattice_2d(1, 1, 30), {{5, 10, 20}});
  const auto v = verdict(gabor_gaussian(1), d, 1);
  EXPECT_TRUE(v.necessary_sampling_ok);
  EXPECT_TRUE(v.necessary_interpolation_ok);
  EXPECT_TRUE(v.ruled_out.empty());
}

TEST(Verdict, StrictToleranceAndCovolumeForm) {
  DensityReport d;
  d.lower = d.upper = {{10, 1.0, false}};
  d.extrapolated_lower = 1.0;
  d.extrapolated_upper = 2.0;
  VerdictOptions strict;
  strict.tolerance = 0.0;
  // ell = 2: covol_- may reach 1, so interpolation survives the covolume form
  // while the density form rules it out.
  const auto v = verdict(paley_wiener_symmetric(1, 1), d, 2, strict);
  EXPECT_TRUE(v.necessary_sampling_ok);
  EXPECT_FALSE(v.necessary_interpolation_ok);
  EXPECT_TRUE(v.covolume_interpolation_ok);
}
