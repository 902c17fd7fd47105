#include "xdpre/policy.hpp"

#include <algorithm>
#include <sstream>

#include "xdpre/errors.hpp"

namespace xdpre::policy {

using groups::Backend;
using groups::BackendId;
using groups::Scalar;

PolicyNode leaf(std::string name) {
    if (name.empty()) throw InvalidParameter("attribute name must be nonempty");
    PolicyNode n;
    n.name = std::move(name);
    return n;
}

PolicyNode gate(uint32_t threshold, std::vector<PolicyNode> children) {
    if (children.empty()) throw InvalidParameter("a gate needs at least one child");
    if (threshold < 1 || threshold > children.size())
        throw InvalidParameter("gate threshold must lie between 1 and the child count");
    PolicyNode n;
    n.threshold = threshold;
    n.children = std::move(children);
    return n;
}

// ---- parser ----

namespace {

struct Token {
    enum Kind { ident, lparen, rparen, comma, end } kind;
    std::string text;
    int line;
    int col;
};

bool ident_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_';
}

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++col;
            ++i;
            continue;
        }
        if (c == '(') {
            out.push_back({Token::lparen, "(", line, col});
            ++col, ++i;
            continue;
        }
        if (c == ')') {
            out.push_back({Token::rparen, ")", line, col});
            ++col, ++i;
            continue;
        }
        if (c == ',') {
            out.push_back({Token::comma, ",", line, col});
            ++col, ++i;
            continue;
        }
        if (ident_char(c)) {
            int start_col = col;
            size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            out.push_back({Token::ident, text.substr(i, j - i), line, start_col});
            col += (int)(j - i);
            i = j;
            continue;
        }
        throw ParseError(line, col, "an attribute, '(', ')' or ','");
    }
    out.push_back({Token::end, "", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    PolicyNode parse() {
        PolicyNode tree = parse_expr();
        if (peek().kind != Token::end)
            throw ParseError(peek().line, peek().col, "end of input");
        return tree;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    PolicyNode parse_expr() {
        const Token& t = peek();
        if (t.kind == Token::lparen) return parse_group();
        if (t.kind == Token::ident) {
            if (t.text == "kofn") return parse_kofn();
            if (t.text == "AND" || t.text == "OR")
                throw ParseError(t.line, t.col, "an attribute (AND and OR are reserved)");
            if (t.text == protection_attribute)
                throw ReservedAttribute("line " + std::to_string(t.line) + ", col " +
                                        std::to_string(t.col) +
                                        ": the protection attribute b cannot appear in a "
                                        "user policy");
            return leaf(next().text);
        }
        throw ParseError(t.line, t.col, "an attribute, '(' or kofn");
    }

    PolicyNode parse_group() {
        next(); // (
        std::vector<PolicyNode> children;
        children.push_back(parse_expr());
        const Token& conn = peek();
        if (conn.kind != Token::ident || (conn.text != "AND" && conn.text != "OR"))
            throw ParseError(conn.line, conn.col, "AND or OR");
        std::string op = next().text;
        children.push_back(parse_expr());
        while (peek().kind == Token::ident && peek().text == op) {
            next();
            children.push_back(parse_expr());
        }
        const Token& close = peek();
        if (close.kind == Token::ident && (close.text == "AND" || close.text == "OR"))
            throw ParseError(close.line, close.col,
                             "'" + op + "' (one group uses one connective)");
        if (close.kind != Token::rparen)
            throw ParseError(close.line, close.col, "')' or '" + op + "'");
        next();
        uint32_t t = op == "AND" ? (uint32_t)children.size() : 1u;
        return gate(t, std::move(children));
    }

    PolicyNode parse_kofn() {
        next(); // kofn
        if (peek().kind != Token::lparen)
            throw ParseError(peek().line, peek().col, "'(' after kofn");
        next();
        const Token& tt = peek();
        bool digits = tt.kind == Token::ident && !tt.text.empty() && tt.text.size() <= 9 &&
                      std::all_of(tt.text.begin(), tt.text.end(),
                                  [](char c) { return c >= '0' && c <= '9'; });
        if (!digits) throw ParseError(tt.line, tt.col, "a threshold integer");
        int t_line = tt.line, t_col = tt.col;
        uint32_t t = (uint32_t)std::stoul(next().text);
        std::vector<PolicyNode> children;
        do {
            if (peek().kind != Token::comma)
                throw ParseError(peek().line, peek().col, "','");
            next();
            children.push_back(parse_expr());
        } while (peek().kind == Token::comma);
        if (peek().kind != Token::rparen)
            throw ParseError(peek().line, peek().col, "',' or ')'");
        next();
        if (t < 1 || t > children.size())
            throw ParseError(t_line, t_col,
                             "a threshold between 1 and " + std::to_string(children.size()));
        return gate(t, std::move(children));
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
};

} // namespace

PolicyNode parse_policy(const std::string& text) { return Parser(tokenize(text)).parse(); }

std::string pretty_print(const PolicyNode& tree) {
    if (tree.is_leaf()) return tree.name;
    size_t n = tree.children.size();
    if (n >= 2 && (tree.threshold == n || tree.threshold == 1)) {
        const char* op = tree.threshold == n ? " AND " : " OR ";
        std::string out = "(";
        for (size_t i = 0; i < n; ++i) {
            if (i) out += op;
            out += pretty_print(tree.children[i]);
        }
        return out + ")";
    }
    std::string out = "kofn(" + std::to_string(tree.threshold);
    for (const auto& c : tree.children) out += ", " + pretty_print(c);
    return out + ")";
}

// ---- matrix compilation ----

namespace {

PolicyNode effective_tree(const PolicyNode& user) {
    return gate(2, {leaf(protection_attribute), user});
}

void validate_user_tree(const PolicyNode& n) {
    if (n.is_leaf()) {
        if (n.name.empty()) throw InvalidParameter("attribute name must be nonempty");
        if (n.name == protection_attribute)
            throw ReservedAttribute("the protection attribute b cannot appear in a "
                                    "user policy");
        for (char c : n.name)
            if (!ident_char(c))
                throw InvalidParameter("attribute name contains a character outside "
                                       "[A-Za-z0-9_]: " + n.name);
        return;
    }
    if (n.threshold < 1 || n.threshold > n.children.size())
        throw InvalidParameter("gate threshold must lie between 1 and the child count");
    for (const auto& c : n.children) validate_user_tree(c);
}

void check_fanin(const PolicyNode& n, uint64_t prime) {
    if (n.is_leaf()) return;
    if (n.children.size() >= prime)
        throw InvalidParameter("gate fan-in must stay below the debug field modulus");
    for (const auto& c : n.children) check_fanin(c, prime);
}

struct MatrixBuilder {
    const Backend& backend;
    size_t width = 1;
    std::vector<std::pair<std::string, std::vector<Scalar>>> rows;

    void walk(const PolicyNode& node, std::vector<Scalar> vec) {
        if (node.is_leaf()) {
            rows.emplace_back(node.name, std::move(vec));
            return;
        }
        uint32_t t = node.threshold;
        size_t base = width;
        width += t - 1;
        for (size_t i = 1; i <= node.children.size(); ++i) {
            std::vector<Scalar> child = vec;
            while (child.size() < base) child.push_back(backend.scalar_from_u64(0));
            Scalar x = backend.scalar_from_u64(i);
            for (uint32_t k = 1; k < t; ++k) child.push_back(x.pow(k));
            walk(node.children[i - 1], std::move(child));
        }
    }
};

} // namespace

AccessMatrix build_matrix(const Backend& backend, const PolicyNode& tree) {
    validate_user_tree(tree);
    if (backend.id() == BackendId::debug) check_fanin(tree, backend.debug_prime());
    MatrixBuilder builder{backend, 1, {}};
    builder.walk(effective_tree(tree), {backend.scalar_from_u64(1)});
    AccessMatrix out;
    out.tree = tree;
    out.protection_row = 0;
    for (auto& [name, vec] : builder.rows) {
        while (vec.size() < builder.width) vec.push_back(backend.scalar_from_u64(0));
        out.m.push_back(std::move(vec));
        out.rho.push_back(name);
    }
    return out;
}

// ---- shares ----

ShareVector generate_shares(const AccessMatrix& matrix, const Scalar& secret, Rng& rng) {
    Backend backend = groups::backend_of(secret);
    std::vector<Scalar> u{secret};
    for (size_t j = 1; j < matrix.cols(); ++j) u.push_back(backend.random_nonzero_scalar(rng));
    return generate_shares_from(matrix, u);
}

ShareVector generate_shares_from(const AccessMatrix& matrix, const std::vector<Scalar>& u) {
    if (u.size() != matrix.cols())
        throw InvalidParameter("share vector u must have one entry per matrix column");
    std::vector<Scalar> shares;
    for (const auto& row : matrix.m) {
        Scalar acc = row[0] * u[0];
        for (size_t j = 1; j < row.size(); ++j) acc = acc + row[j] * u[j];
        shares.push_back(acc);
    }
    return {std::move(shares), u[0]};
}

// ---- satisfiability ----

namespace {

struct Annotated {
    const PolicyNode* node; // points into the caller-owned effective tree
    bool sat = false;
    size_t row = 0; // leaves only
    std::vector<Annotated> kids;
};

// LeafSat: bool(const std::string& name, size_t row)
template <class LeafSat>
Annotated annotate(const PolicyNode& node, LeafSat&& leaf_sat, size_t& next_row) {
    Annotated a;
    a.node = &node;
    if (node.is_leaf()) {
        a.row = next_row++;
        a.sat = leaf_sat(node.name, a.row);
        return a;
    }
    size_t sat_count = 0;
    for (const auto& c : node.children) {
        a.kids.push_back(annotate(c, leaf_sat, next_row));
        if (a.kids.back().sat) ++sat_count;
    }
    a.sat = sat_count >= node.threshold;
    return a;
}

// most specific unsatisfied gate: descend into the first unsatisfied gate child
const Annotated& blame(const Annotated& g) {
    for (const auto& kid : g.kids)
        if (!kid.sat && !kid.node->is_leaf()) return blame(kid);
    return g;
}

void collect_minimal(const Annotated& a, std::vector<size_t>& out) {
    if (a.node->is_leaf()) {
        out.push_back(a.row);
        return;
    }
    uint32_t taken = 0;
    for (const auto& kid : a.kids) {
        if (taken == a.node->threshold) break;
        if (!kid.sat) continue;
        collect_minimal(kid, out);
        ++taken;
    }
}

std::set<size_t> checked_row_set(const AccessMatrix& matrix, const std::vector<size_t>& rows) {
    std::set<size_t> want(rows.begin(), rows.end());
    for (size_t r : want)
        if (r >= matrix.rows())
            throw InvalidParameter("row index " + std::to_string(r) +
                                   " is outside the matrix");
    return want;
}

} // namespace

std::vector<size_t> satisfying_rows(const AccessMatrix& matrix,
                                    const std::set<std::string>& attrs,
                                    bool has_protection) {
    PolicyNode eff = effective_tree(matrix.tree);
    size_t next_row = 0;
    Annotated root = annotate(
        eff,
        [&](const std::string& name, size_t) {
            return name == protection_attribute ? has_protection : attrs.count(name) > 0;
        },
        next_row);
    if (!root.sat) {
        const Annotated& g = blame(root);
        throw PolicyNotSatisfied("unsatisfied gate " + pretty_print(*g.node));
    }
    std::vector<size_t> out;
    collect_minimal(root, out);
    std::sort(out.begin(), out.end());
    return out;
}

// ---- reconstruction ----

namespace {

Scalar lagrange_at_zero(const Backend& backend, const std::vector<size_t>& s, size_t i) {
    Scalar num = backend.scalar_from_u64(1);
    Scalar den = backend.scalar_from_u64(1);
    Scalar xi = backend.scalar_from_u64(i);
    for (size_t j : s) {
        if (j == i) continue;
        Scalar xj = backend.scalar_from_u64(j);
        num = num * (-xj);
        den = den * (xi - xj);
    }
    return num * den.inverse();
}

struct LagrangeWalker {
    const Backend& backend;
    std::map<size_t, Scalar>& coeffs;

    // a.sat marks "active under the given rows"; weight multiplies down
    void run(const Annotated& a, const Scalar& weight) {
        if (a.node->is_leaf()) {
            coeffs.emplace(a.row, weight);
            return;
        }
        std::vector<size_t> s;
        for (size_t i = 0; i < a.kids.size(); ++i)
            if (a.kids[i].sat) s.push_back(i + 1);
        for (size_t i : s)
            run(a.kids[i - 1], weight * lagrange_at_zero(backend, s, i));
    }
};

} // namespace

ReconPlan recon_coefficients(const AccessMatrix& matrix, const std::vector<size_t>& rows) {
    std::set<size_t> want = checked_row_set(matrix, rows);
    PolicyNode eff = effective_tree(matrix.tree);
    size_t next_row = 0;
    Annotated root = annotate(
        eff, [&](const std::string&, size_t row) { return want.count(row) > 0; },
        next_row);
    if (!root.sat) throw NotAuthorized("rows do not satisfy the compiled policy");
    Backend backend = groups::backend_of(matrix.m[0][0]);
    ReconPlan plan;
    plan.rows.assign(want.begin(), want.end());
    LagrangeWalker walker{backend, plan.coeffs};
    walker.run(root, backend.scalar_from_u64(1));
    for (size_t r : plan.rows) plan.coeffs.emplace(r, backend.scalar_from_u64(0));
    return plan;
}

ReconPlan recon_coefficients_solve(const AccessMatrix& matrix,
                                   const std::vector<size_t>& rows) {
    std::set<size_t> want = checked_row_set(matrix, rows);
    std::vector<size_t> sel(want.begin(), want.end());
    Backend backend = groups::backend_of(matrix.m[0][0]);
    size_t k = sel.size(), c = matrix.cols();
    Scalar zero = backend.scalar_from_u64(0);
    Scalar one = backend.scalar_from_u64(1);

    // augmented system: sum_j w_j M_{sel[j]} = e_1, i.e. A w = e_1 with
    // A[eq][j] = M[sel[j]][eq]
    std::vector<std::vector<Scalar>> a(c, std::vector<Scalar>(k + 1, zero));
    for (size_t eq = 0; eq < c; ++eq) {
        for (size_t j = 0; j < k; ++j) a[eq][j] = matrix.m[sel[j]][eq];
        a[eq][k] = eq == 0 ? one : zero;
    }

    std::vector<size_t> pivot_col;
    size_t rank = 0;
    for (size_t col = 0; col < k && rank < c; ++col) {
        size_t piv = rank;
        while (piv < c && a[piv][col].is_zero()) ++piv;
        if (piv == c) continue;
        std::swap(a[rank], a[piv]);
        Scalar inv = a[rank][col].inverse();
        for (size_t j = col; j <= k; ++j) a[rank][j] = a[rank][j] * inv;
        for (size_t eq = 0; eq < c; ++eq) {
            if (eq == rank || a[eq][col].is_zero()) continue;
            Scalar f = a[eq][col];
            for (size_t j = col; j <= k; ++j) a[eq][j] = a[eq][j] - f * a[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (size_t eq = rank; eq < c; ++eq)
        if (!a[eq][k].is_zero())
            throw NotAuthorized("rows do not span the reconstruction target");

    ReconPlan plan;
    plan.rows = sel;
    for (size_t j = 0; j < k; ++j) plan.coeffs.emplace(sel[j], zero);
    for (size_t i = 0; i < rank; ++i)
        plan.coeffs.insert_or_assign(sel[pivot_col[i]], a[i][k]);
    return plan;
}

// ---- canonical dump ----

std::string dump_matrix(const AccessMatrix& matrix) {
    std::ostringstream out;
    out << "policy " << pretty_print(matrix.tree) << "\n";
    out << "dims " << matrix.rows() << " " << matrix.cols() << "\n";
    out << "protection_row " << matrix.protection_row << "\n";
    for (const auto& row : matrix.m) {
        out << "M";
        for (const auto& v : row) out << " " << v.to_decimal();
        out << "\n";
    }
    for (size_t r = 0; r < matrix.rho.size(); ++r)
        out << "rho " << r << ":" << matrix.rho[r] << "\n";
    return out.str();
}

namespace {

[[noreturn]] void dump_error(size_t line, const std::string& detail) {
    throw DecodeError("matrix dump line " + std::to_string(line) + ": " + detail);
}

} // namespace

AccessMatrix parse_matrix(const Backend& backend, const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.size() < 3 || lines[0].rfind("policy ", 0) != 0)
        dump_error(1, "expected a policy line");

    PolicyNode tree;
    try {
        tree = parse_policy(lines[0].substr(7));
    } catch (const Error& e) {
        dump_error(1, e.what());
    }
    AccessMatrix built = build_matrix(backend, tree);

    std::string dims = "dims " + std::to_string(built.rows()) + " " +
                       std::to_string(built.cols());
    if (lines[1] != dims) dump_error(2, "dimension mismatch, expected '" + dims + "'");
    if (lines[2] != "protection_row 0") dump_error(3, "expected 'protection_row 0'");

    size_t expect = 3 + 2 * built.rows();
    if (lines.size() != expect)
        dump_error(lines.size(), "expected " + std::to_string(expect) + " lines");

    for (size_t r = 0; r < built.rows(); ++r) {
        size_t ln = 4 + r;
        std::istringstream row_in(lines[3 + r]);
        std::string word;
        if (!(row_in >> word) || word != "M") dump_error(ln, "expected an M row");
        for (size_t j = 0; j < built.cols(); ++j) {
            if (!(row_in >> word)) dump_error(ln, "missing matrix entry");
            Scalar v = backend.scalar_from_u64(0);
            try {
                v = backend.scalar_from_decimal(word);
            } catch (const DecodeError& e) {
                dump_error(ln, e.what());
            }
            if (!(v == built.m[r][j]))
                dump_error(ln, "matrix entry mismatch at row " + std::to_string(r) +
                                   " col " + std::to_string(j));
        }
        if (row_in >> word) dump_error(ln, "trailing matrix entry");
    }
    for (size_t r = 0; r < built.rows(); ++r) {
        size_t ln = 4 + built.rows() + r;
        std::string rho = "rho " + std::to_string(r) + ":" + built.rho[r];
        if (lines[3 + built.rows() + r] != rho)
            dump_error(ln, "expected '" + rho + "'");
    }
    return built;
}

} // namespace xdpre::policy
