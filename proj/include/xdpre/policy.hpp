#pragma once

// Monotone access-policy DSL, LSSS compilation and reconstruction.
//
// Grammar:   expr := attr | (expr AND expr ...) | (expr OR expr ...)
//                  | kofn(t, expr, ...)
//            attr := [A-Za-z0-9_]+  (AND, OR, kofn reserved; "b" is the
//                                    protection attribute and cannot appear
//                                    in user policies)
//
// A policy tree compiles to a share matrix for the effective policy
// AND(b, tree): the protection attribute is mandatory in every authorized
// set, so attribute rows alone can never reconstruct the secret.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "xdpre/groups.hpp"
#include "xdpre/rng.hpp"

namespace xdpre::policy {

inline constexpr const char* protection_attribute = "b";

// Leaf when children is empty (name set); otherwise a t-of-n threshold gate
// over the ordered children (1-indexed; the index is the share x-coordinate).
// AND is t=n, OR is t=1.
struct PolicyNode {
    std::string name;
    uint32_t threshold = 0;
    std::vector<PolicyNode> children;

    bool is_leaf() const { return children.empty(); }
    bool operator==(const PolicyNode&) const = default;
};

PolicyNode leaf(std::string name);
PolicyNode gate(uint32_t threshold, std::vector<PolicyNode> children);

// ParseError on syntax errors (with 1-based line/col and the expected set);
// ReservedAttribute if the policy names the protection attribute.
PolicyNode parse_policy(const std::string& text);

// Canonical rendering; parse_policy(pretty_print(t)) reproduces t, and
// pretty_print . parse_policy is a fixpoint on canonical text.
std::string pretty_print(const PolicyNode& tree);

// Share matrix for AND(b, tree).  Row 0 always carries the protection
// attribute; the remaining rows map bijectively onto the user-policy leaves
// in depth-first order.
struct AccessMatrix {
    std::vector<std::vector<groups::Scalar>> m;
    std::vector<std::string> rho;    // row -> attribute name
    size_t protection_row = 0;
    PolicyNode tree;                 // the user policy (without b)

    size_t rows() const { return m.size(); }
    size_t cols() const { return m.empty() ? 0 : m[0].size(); }
};

// Vandermonde threshold embedding: the root vector is (1); a t-of-n gate
// with parent vector w allocates t-1 fresh columns and hands child i the
// vector w followed by (i^1, ..., i^(t-1)) in those columns.  Deterministic.
// InvalidParameter on malformed trees, ReservedAttribute if a leaf names b.
AccessMatrix build_matrix(const groups::Backend& backend, const PolicyNode& tree);

struct ShareVector {
    std::vector<groups::Scalar> shares; // row -> share M_j . u
    groups::Scalar secret;              // u[0]; test-visible
};

// u = (secret, y_2, ..., y_c) with each y_j uniform in Z_p^*.
ShareVector generate_shares(const AccessMatrix& matrix, const groups::Scalar& secret,
                            Rng& rng);
// Same with a caller-supplied u (|u| must equal the column count).
ShareVector generate_shares_from(const AccessMatrix& matrix,
                                 const std::vector<groups::Scalar>& u);

// Minimal authorized row set: at every gate the t lowest-indexed satisfiable
// children win.  The protection row satisfies its leaf iff has_protection.
// PolicyNotSatisfied (naming the first unsatisfied gate) when no authorized
// set exists.
std::vector<size_t> satisfying_rows(const AccessMatrix& matrix,
                                    const std::set<std::string>& attrs,
                                    bool has_protection);

// coeffs maps every row in rows to a coefficient (0 when unused) with
// sum_j coeffs[j] * M_j = (1, 0, ..., 0).
struct ReconPlan {
    std::vector<size_t> rows;
    std::map<size_t, groups::Scalar> coeffs;
};

// Per-gate Lagrange bases: child i in covered set S gets weight
// prod_{j in S, j != i} (0 - x_j) / (x_i - x_j).  Any authorized superset is
// accepted.  NotAuthorized when rows is not authorized.
ReconPlan recon_coefficients(const AccessMatrix& matrix, const std::vector<size_t>& rows);

// Independent route: Gaussian elimination over the scalar field solves
// sum_j w_j M_j = e_1 directly, free variables pinned to 0.
ReconPlan recon_coefficients_solve(const AccessMatrix& matrix,
                                   const std::vector<size_t>& rows);

// Canonical dump: policy line, dimensions, row-major decimal scalars, then
// the rho map as row:attr lines.  parse_matrix recompiles the policy line
// and cross-checks every dumped value; DecodeError on any mismatch.
std::string dump_matrix(const AccessMatrix& matrix);
AccessMatrix parse_matrix(const groups::Backend& backend, const std::string& text);

} // namespace xdpre::policy
