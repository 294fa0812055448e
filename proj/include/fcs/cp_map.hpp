#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fcs/gauge_group.hpp"
#include "fcs/operator_core.hpp"

namespace fcs {

/// Completely positive map E: M_d (x) M_d -> M_d stored by its Choi matrix.
///
/// Index conventions: an input index u in [0, d^2) is u = site * d + aux, where
/// `site` is the first tensor factor (the observable A in E(A (x) B)) and `aux`
/// the second (the nested remainder B). The Choi matrix is
///     C = sum_{u,v} e_{uv} (x) E(e_{uv}),   C[(u,i),(v,j)] = E(e_{uv})[i,j],
/// with row index u * d + i. E is CP iff C is PSD.
///
/// Construction only checks the shape and Hermiticity; complete positivity and
/// unitality are diagnosed by check_fcs_conditions so that defective maps can
/// still be reported on.
class CpMap {
public:
    CpMap(Index d, Matrix choi, const Tolerances& tol = {});

    Index d() const { return d_; }
    const Matrix& choi() const { return choi_; }

    /// E(X) for X in M_{d^2}.
    Matrix apply(const Matrix& x) const;
    /// Trace dual E_*: M_d -> M_{d^2}, Tr(E_*(s) X) = Tr(s E(X)).
    Matrix apply_dual(const Matrix& sigma) const;
    /// Transfer map C -> E(1 (x) C).
    Matrix transfer(const Matrix& c) const;
    /// Trace dual of the transfer map.
    Matrix transfer_dual(const Matrix& sigma) const;
    /// E(1_{d^2}).
    Matrix unit_image() const;

private:
    Index d_;
    Matrix choi_;
};

/// Kraus family K_1..K_l in M_d (x) M_d with E(A) = Tr^(2)(sum_j K_j^* A K_j).
///
/// K_j acts from (aux_in (x) slot) to (site (x) aux_out); Tr^(2) traces the
/// slot. `standard` holds the underlying standard Kraus operators
/// V_m: C^d -> C^d (x) C^d with E(X) = sum_m V_m^* X V_m, ordered by
/// decreasing Choi eigenvalue and packed d at a time:
///     K_j = sum_s V_{j d + s} (1 (x) <s|).
struct KrausPacked {
    Index d = 0;
    std::vector<Matrix> kraus;     // l matrices of size d^2 x d^2
    std::vector<Matrix> standard;  // r matrices of size d^2 x d, zero-padded to l * d

    Index labels() const { return static_cast<Index>(kraus.size()); }
};

Matrix apply_E(const CpMap& e, const Matrix& x);

/// Choi matrix of a linear map given by its action on M_{d^2}. Linearity is
/// checked on random samples; a failure raises InputError.
CpMap choi_of(Index d, const std::function<Matrix(const Matrix&)>& apply, std::uint64_t seed = 7);

CpMap choi_from_kraus(const KrausPacked& k);
/// From standard Kraus operators V_m of size d^2 x d.
CpMap choi_from_standard_kraus(Index d, const std::vector<Matrix>& v);

/// Packed Kraus family of a CP map. Choi eigencomponents with eigenvalue
/// <= tol_rank * max(1, lambda_max) are dropped; a Choi eigenvalue below
/// -tol.psd raises NotCpError. Degenerate eigenspaces are expressed in a
/// canonical basis so the result is independent of the eigensolver's choice.
KrausPacked kraus_from_choi(const CpMap& e, double tol_rank = 1e-12, const Tolerances& tol = {});

struct CovarianceCheck {
    bool pass = false;
    double max_violation = 0.0;
};

/// Checks E(g^{(x)2} X g^{(x)2 *}) = g E(X) g^* on all matrix units X of M_{d^2}
/// and all group elements, in operator norm.
CovarianceCheck check_g_covariance(const CpMap& e, const GaugeGroup& g, double tol = 1e-10);

/// The triple (M_d, E, rho) with rho given by its density W.
struct FCState {
    CpMap map;
    DensityMatrix W;

    Index d() const { return map.d(); }
};

struct InvariantState {
    DensityMatrix W;
    Index fixed_space_dim = 0;
    double residual = 0.0;
};

/// rho with rho(E(1 (x) C)) = rho(C): the Cesaro limit of the transfer dual
/// started from I/d, computed exactly as the spectral projection onto the
/// eigenvalue-1 space. Fixed-space dimension is reported, not resolved.
InvariantState invariant_state(const CpMap& e, const Tolerances& tol = {});

struct FcsDiagnostics {
    double cp_violation = 0.0;          // max(0, -lambda_min(Choi))
    double unitality_violation = 0.0;   // |E(1) - 1| in operator norm
    double invariance_violation = 0.0;  // max over matrix units |rho(E(1 (x) C)) - rho(C)|

    bool accepted(double tol_inv = 1e-8) const {
        return cp_violation < tol_inv && unitality_violation < tol_inv && invariance_violation < tol_inv;
    }
};

FcsDiagnostics check_fcs_conditions(const FCState& s);

/// max over matrix units C of |Tr(W E(1 (x) C)) - Tr(W C)|.
double invariance_residual(const CpMap& e, const Matrix& w);

}  // namespace fcs
