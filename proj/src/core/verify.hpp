#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grid.hpp"
#include "kspecial.hpp"

namespace kprab {

enum class IdentityId {
    Composition_2_12,
    Relation_3_7,
    Relation_3_16,
    Reduce_gamma0_Hilfer,
    Reduce_nu0,
    Reduce_nu1,
    Reduce_k1_classical,
    LaplaceLemma_3_1,
    LaplaceLemma_3_2,
    LaplaceLemma_3_3,
    LaplaceLemma_3_4,
    SumuduLemma_3_5,
    SumuduLemma_3_6,
    SumuduLemma_3_7,
    SumuduLemma_3_8,
    SumuduLemma_3_9,
    Duality_Sumudu_Laplace,
};

constexpr int kIdentityCount = 17;

const char* to_string(IdentityId id);
std::optional<IdentityId> identity_from_string(const std::string& s);

// Threshold on max_rel_err, and whether the identity is discretization
// limited (then a refinement check at 2N is part of the verdict: the 2N
// error must drop to 0.6x, unless it is already below 1e-4 * threshold).
double default_threshold(IdentityId id);
bool is_quadrature_mediated(IdentityId id);

// Raw parameter values; validation happens when the case runs so that a bad
// case turns into a failed report instead of an exception.
//
// Composition_2_12 composes P^gamma_{alpha,mu} with P^{gamma/2}_{alpha,mu/2}.
// Duality cases name the operator in test_function_id ("HPDeriv", "kernel").
struct IdentityCase {
    IdentityId id;
    double k = 1.0, alpha = 1.0, mu = 0.5, gamma = 0.0, omega = 0.0, nu = 0.5;
    std::string test_function_id = "one";
    // 0 = take the right end of the suite grid
    double horizon = 0.0;
};

struct IdentityReport {
    IdentityCase c;
    std::size_t grid_size = 0;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    double refined_rel_err = 0.0;
    bool refinement_ok = true;
    bool passed = false;
    double threshold = 0.0;
    std::string lhs_path;
    std::string rhs_path;
    std::string diagnostic;
};

// The grid supplies the cell count N (and the horizon unless the case sets one).
IdentityReport run_identity(const IdentityCase& c, const Grid1D& grid, const SeriesControl& ctrl = {});
std::vector<IdentityReport> run_suite(const std::vector<IdentityCase>& cases, const Grid1D& grid,
                                      const SeriesControl& ctrl = {});

std::vector<IdentityCase> default_suite();
// [0, 2] with 4096 cells
Grid1D default_suite_grid();

std::string reports_to_json(const std::vector<IdentityReport>& reports);

// Independent k = 1 references used by the classical reduction.
double classical_mittag_leffler(double z, double alpha, double beta, double gamma);
double classical_prabhakar_kernel(double t, double alpha, double mu, double gamma, double omega);

}  // namespace kprab
