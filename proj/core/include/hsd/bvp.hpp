#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hsd/solver.hpp"

namespace hsd {

/// Partial transform along x_m at xi_m = p (Riemann sum, p need not be a node),
/// followed by the transform over x'. One value per xi'-slice.
std::vector<cplx> trace_at_plane(const SampledField& u_plus, double p);

struct VandermondeSolution {
    std::vector<std::vector<cplx>> coefficients;  // c_k per xi'-slice, k = 1..n
    double condition = 1.0;                       // 2-norm condition estimate
    bool ill_conditioned = false;                 // condition above kVandermondeWarn
};

inline constexpr double kVandermondeWarn = 1e8;
inline constexpr int kVandermondeMaxOrder = 12;

/// Solves sum_k c_k p_j^{k-1} = rhs_j for every xi'-slice.
/// Throws Input on duplicate nodes or more than 12 nodes.
VandermondeSolution vandermonde_solve(const std::vector<double>& p, const std::vector<std::vector<cplx>>& rhs);

/// Hyperplane conditions u~_+(xi', p_j) = r_j(xi'). An optional n x n mixing matrix
/// (row-major) replaces them by linear combinations sum_j M_ij u~_+(xi', p_j) = r_i.
struct TraceConditions {
    std::vector<double> p;
    std::vector<std::vector<cplx>> r;
    std::vector<cplx> mixing;
};

/// Restriction conditions (A_j u_+)|_{x_m=0} = r_j with A_j given by its symbol of order gamma_j.
struct PseudoCondition {
    std::function<cplx(double xi_prime_norm, double xi_m)> symbol;
    double gamma = 0.0;
    std::vector<cplx> r;
};

struct BcMatrix {
    int n = 0;
    /// Per xi'-slice, row-major n x n.
    std::vector<std::vector<cplx>> entries;
    double inf_abs_det = 0.0;
    std::size_t argmin_slice = 0;
    /// Edge / peak of the integrands on the slice nearest xi' = 0 (gated), and over all slices.
    double tail_ratio = 0.0;
    double tail_ratio_max = 0.0;
};

inline constexpr double kDeterminantThreshold = 1e-8;
inline constexpr double kIntegrandTailLimit = 1e-3;

struct BvpOptions {
    double trace_tolerance = 1e-3;
    double determinant_threshold = kDeterminantThreshold;
    SolveOptions solve;
};

struct BvpResult {
    explicit BvpResult(const SpectralGrid& g) : solution(g) {}

    SolveResult solution;
    /// Max over conditions and interior xi'-slices of |reproduced - r_j| / max |r_j|.
    double condition_error = 0.0;
    bool condition_ok = true;
    std::vector<double> data_orders;  // Sobolev order of each r_j
    double vandermonde_condition = 0.0;
    BcMatrix matrix;
    std::vector<std::string> warnings;
};

/// Homogeneous problem in the Minus(n) regime closed by n hyperplane conditions.
BvpResult solve_bvp_traces(const HalfSpaceProblem& p, double s, const TraceConditions& bc, const BvpOptions& opt = {});

/// a_jk(xi') = integral of A_j Lambda_+^ae sigma_+^{-1} xi_m^{k-1} dxi_m.
/// Requires gamma_j + ae + k < -1 and an integrand that has decayed by the window edge.
BcMatrix pseudo_bc_matrix(const HalfSpaceProblem& p, double s, const std::vector<PseudoCondition>& bc);

/// Homogeneous problem closed by pseudodifferential conditions; throws NonSolvable
/// when inf |det a| does not exceed the threshold.
BvpResult solve_bvp_pseudo(const HalfSpaceProblem& p, double s, const std::vector<PseudoCondition>& bc,
                           const BvpOptions& opt = {});

/// (1 / 2 pi) integral of A u~ dxi_m per xi'-slice.
std::vector<cplx> restrict_at_boundary(const SampledField& u_xi, const PseudoCondition& a);

}  // namespace hsd
