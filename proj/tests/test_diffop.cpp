#include <gtest/gtest.h>

#include <random>

#include "hsd/diffop.hpp"
#include "hsd/error.hpp"
#include "hsd/index.hpp"
#include "hsd/spectral.hpp"
#include "hsd/symbol.hpp"
#include "oracles.hpp"

using namespace hsd;
using oracle::cplx;

namespace {

DifferenceOperator half_shift(double h, int dim = 1) {
    std::vector<double> zero(static_cast<std::size_t>(dim), 0.0), step = zero;
    step.back() = h;
    return DifferenceOperator({{1.0, zero}, {-0.5, step}});
}

double l2(const SampledField& f) {
    double acc = 0.0;
    for (const cplx& v : f.values) acc += std::norm(v);
    return std::sqrt(acc);
}

}  // namespace

TEST(DifferenceOperator, RejectsBadTerms) {
    EXPECT_THROW(DifferenceOperator(std::vector<ShiftTerm>{}), Error);
    EXPECT_THROW(DifferenceOperator(std::vector<ShiftTerm>{{1.0, {-0.5}}}), Error);
    EXPECT_THROW(DifferenceOperator(std::vector<ShiftTerm>{{1.0, {0.0}}, {1.0, {0.0, 1.0}}}), Error);
}

TEST(ApplyOperator, IdentityLeavesFieldUnchanged) {
    const SpectralGrid g(1, 64, 8.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    SampledField u(g, Side::X);
    for (cplx& v : u.values) v = cplx(n(rng), n(rng));
    const SampledField v = apply_operator(DifferenceOperator::identity(1), u);
    EXPECT_EQ(v.values, u.values);
}

TEST(ApplyOperator, PointMassShifts) {
    const SpectralGrid g(1, 64, 8.0);
    const double h = 3 * g.dx();
    SampledField u(g, Side::X);
    u.values[32] = 1.0;
    const SampledField v = apply_operator(half_shift(h), u);
    EXPECT_EQ(v.values[32], cplx(1.0));
    EXPECT_EQ(v.values[29], cplx(-0.5));
    double rest = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i)
        if (i != 32 && i != 29) rest += std::abs(v.values[i]);
    EXPECT_EQ(rest, 0.0);
}

TEST(ApplyOperator, NonCommensurateShiftRejected) {
    const SpectralGrid g(1, 64, 8.0);
    EXPECT_THROW(apply_operator(half_shift(0.3 * g.dx()), SampledField::zeros(g, Side::X)), Error);
}

TEST(ApplyOperator, FourierDiagonalization) {
    const SpectralGrid g(1, 1024, 64.0);
    const DifferenceOperator d({{2.0, {0.0}}, {cplx(0.3, -0.2), {8 * g.dx()}}, {-0.4, {21 * g.dx()}}});
    const SampledField u = sample_x(g, [](const std::vector<double>&, double x) {
        return cplx(oracle::gaussian(x - 1.0), 0.5 * oracle::gaussian(2.0 * x));
    });
    const SampledField lhs = fourier_forward(apply_operator(d, u));
    const SampledField rhs = symbol_eval(SymbolSpec{d}, g) * fourier_forward(u);
    EXPECT_LT(oracle::max_abs_diff(lhs.values, rhs.values), 1e-10);
}

TEST(ApplyOperator, FourierDiagonalizationTwoDimensional) {
    const SpectralGrid g(2, 64, 8.0);
    const DifferenceOperator d({{1.0, {0.0, 0.0}}, {0.25, {2 * g.dx(), 3 * g.dx()}}, {-0.25, {-g.dx(), 0.0}}});
    const SampledField u = sample_x(g, [](const std::vector<double>& xp, double x) {
        return oracle::gaussian(1.3 * xp[0]) * oracle::gaussian(1.1 * x);
    });
    const SampledField lhs = fourier_forward(apply_operator(d, u));
    const SampledField rhs = symbol_eval(SymbolSpec{d}, g) * fourier_forward(u);
    EXPECT_LT(oracle::max_abs_diff(lhs.values, rhs.values), 1e-10);
}

TEST(Symbol, Examples) {
    const SpectralGrid g(1, 64, 8.0);
    const SampledField one = symbol_eval(SymbolSpec{DifferenceOperator::identity(1)}, g);
    for (const cplx& v : one.values) EXPECT_EQ(v, cplx(1.0));

    const double h = 0.5;
    const SymbolSpec spec{half_shift(h)};
    EXPECT_NEAR(std::abs(symbol_at(spec, {0.0}) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(symbol_at(spec, {oracle::pi / h}) - 1.5), 0.0, 1e-15);

    const SymbolSpec inv_omega{RationalPreset::omega_power(-1)};
    EXPECT_NEAR(std::abs(symbol_at(inv_omega, {0.0}) - cplx(-1.0)), 0.0, 1e-15);
    const SymbolSpec omega{RationalPreset::omega_power(1)};
    EXPECT_NEAR(std::abs(symbol_at(omega, {0.0}) - cplx(-1.0)), 0.0, 1e-15);
}

TEST(Symbol, ProductMultiplies) {
    const SpectralGrid g(2, 32, 6.0);
    const SymbolSpec a{half_shift(0.25, 2)};
    const SymbolSpec b{RationalPreset::omega_power(2)};
    const SymbolSpec p{ProductSpec{{a, b}}};
    const SampledField prod = symbol_eval(p, g);
    const SampledField ref = symbol_eval(a, g) * symbol_eval(b, g);
    EXPECT_LT(oracle::max_abs_diff(prod.values, ref.values), 1e-14);
}

TEST(Symbol, ValidationErrors) {
    RationalPreset bad;
    bad.zeros.push_back({1.0, 0.0, false});
    EXPECT_THROW(validate(SymbolSpec{bad}), Error);
    EXPECT_THROW(validate(SymbolSpec{ProductSpec{}}), Error);
}

TEST(Ellipticity, Examples) {
    const SpectralGrid g(1, 512, 16.0 * oracle::pi);
    EXPECT_EQ(ellipticity_check(symbol_eval(SymbolSpec{DifferenceOperator::identity(1)}, g)).min_modulus, 1.0);
    const EllipticityReport half = ellipticity_check(symbol_eval(SymbolSpec{half_shift(1.0)}, g));
    EXPECT_NEAR(half.min_modulus, 0.5, 1e-14);
    EXPECT_NEAR(std::remainder(half.xi_at[0], 2.0 * oracle::pi), 0.0, 1e-12);
    const DifferenceOperator degenerate({{1.0, {0.0}}, {-1.0, {1.0}}});
    EXPECT_NEAR(ellipticity_check(symbol_eval(SymbolSpec{degenerate}, g)).min_modulus, 0.0, 1e-14);
}

TEST(Summability, NormAndBounds) {
    EXPECT_EQ(summability_norm(DifferenceOperator::identity(2)), 1.0);
    EXPECT_EQ(summability_norm(half_shift(1.0)), 1.5);
    const SpectralGrid g(1, 1024, 64.0);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n;
    const DifferenceOperator d({{1.0, {0.0}}, {cplx(0.2, 0.3), {4 * g.dx()}}, {-0.35, {9 * g.dx()}}});
    const double bound = summability_norm(d);
    const SampledField sigma = symbol_eval(SymbolSpec{d}, g);
    EXPECT_LE(sigma.max_abs(), bound);
    for (int trial = 0; trial < 10; ++trial) {
        SampledField u(g, Side::X);
        for (cplx& v : u.values) v = cplx(n(rng), n(rng));
        EXPECT_LE(l2(apply_operator(d, u)), bound * l2(u));
    }
}

TEST(Summability, DominantCoefficientIsElliptic) {
    const SpectralGrid g(1, 512, 16.0 * oracle::pi);
    const DifferenceOperator d({{3.0, {0.0}}, {cplx(0.5, 0.5), {1.0}}, {-0.8, {2.0}}, {0.6, {5.0}}});
    double others = 0.0;
    for (std::size_t k = 1; k < d.terms().size(); ++k) others += std::abs(d.terms()[k].coeff);
    const SampledField sigma = symbol_eval(SymbolSpec{d}, g);
    EXPECT_GT(ellipticity_check(sigma).min_modulus, 3.0 - others);
    WindingOptions per_period;
    per_period.mode = WindingMode::PerPeriod;
    per_period.period = 2.0 * oracle::pi;
    EXPECT_EQ(winding_number(sigma, per_period).ae, 0);
    EXPECT_EQ(winding_number(sigma).ae, 0);
}

TEST(Commensurability, StepDetection) {
    const DifferenceOperator d({{1.0, {0.0}}, {1.0, {0.5}}, {1.0, {0.75}}});
    ASSERT_TRUE(last_axis_step(d).has_value());
    EXPECT_NEAR(*last_axis_step(d), 0.25, 1e-15);
    EXPECT_FALSE(last_axis_step(DifferenceOperator::identity(1)).has_value());
    const SpectralGrid g(1, 64, 8.0);
    EXPECT_TRUE(is_commensurate(half_shift(2 * g.dx()), g));
    EXPECT_FALSE(is_commensurate(half_shift(0.5 * g.dx()), g));
}
