// SPDX-License-Identifier: Apache-2.0
#include "stlab/endo_galois.hpp"

#include <stdexcept>

namespace stlab {

EndAlgebra EndAlgebra::from_generators(const std::vector<RationalMatrix>& generators, int n) {
    if (n <= 0) throw std::invalid_argument("algebra: ambient dimension must be positive");
    EndAlgebra a;
    a.n_ = n;
    a.basis_ = algebra_closure(generators, n);
    const int d = a.dim();
    a.sc_.assign(static_cast<size_t>(d) * d * d, Rational(0));
    std::vector<std::vector<Rational>> flat;
    flat.reserve(d);
    for (const auto& b : a.basis_) flat.push_back(b.vec());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            auto coords = solve_coordinates(flat, (a.basis_[i] * a.basis_[j]).vec());
            if (!coords) throw std::logic_error("algebra: closure not multiplicatively closed");
            for (int k = 0; k < d; ++k) a.sc_[(static_cast<size_t>(i) * d + j) * d + k] = (*coords)[k];
        }
    return a;
}

const Rational& EndAlgebra::structure_constant(int i, int j, int k) const {
    const int d = dim();
    return sc_[(static_cast<size_t>(i) * d + j) * d + k];
}

std::optional<std::vector<Rational>> EndAlgebra::coordinates(const RationalMatrix& m) const {
    if (m.rows() != n_ || m.cols() != n_)
        throw std::invalid_argument("algebra: coordinates shape mismatch");
    std::vector<std::vector<Rational>> flat;
    flat.reserve(basis_.size());
    for (const auto& b : basis_) flat.push_back(b.vec());
    return solve_coordinates(flat, m.vec());
}

RationalMatrix EndAlgebra::from_coordinates(const std::vector<Rational>& coords) const {
    if (static_cast<int>(coords.size()) != dim())
        throw std::invalid_argument("algebra: coordinate length mismatch");
    RationalMatrix m(n_, n_);
    for (int k = 0; k < dim(); ++k)
        if (coords[k] != 0) m = m + basis_[k] * coords[k];
    return m;
}

GaloisTwistGroup GaloisTwistGroup::trivial(int algebra_dim) {
    GaloisTwistGroup g;
    g.labels = {"id"};
    g.table = {{0}};
    g.actions = {RationalMatrix::identity(algebra_dim)};
    return g;
}

GaloisTwistGroup GaloisTwistGroup::multiquadratic(std::vector<long long> discs,
                                                  std::vector<RationalMatrix> actions) {
    const int r = static_cast<int>(discs.size());
    if (r > 20) throw std::invalid_argument("galois: descriptor too long");
    const int order = 1 << r;
    if (static_cast<int>(actions.size()) != order)
        throw std::invalid_argument("galois: need one action per group element");
    GaloisTwistGroup g;
    g.discs = std::move(discs);
    g.actions = std::move(actions);
    g.table.assign(order, std::vector<int>(order));
    for (int s = 0; s < order; ++s)
        for (int t = 0; t < order; ++t) g.table[s][t] = s ^ t;
    g.labels.resize(order);
    g.labels[0] = "id";
    for (int s = 1; s < order; ++s) g.labels[s] = "g" + std::to_string(s);
    return g;
}

namespace {

bool is_squarefree(long long d) {
    if (d == 0) return false;
    long long v = d < 0 ? -d : d;
    for (long long q = 2; q * q <= v; ++q) {
        if (v % q) continue;
        v /= q;
        if (v % q == 0) return false;
        while (v % q == 0) v /= q;  // unreachable, kept for clarity
    }
    return true;
}

}  // namespace

std::vector<std::string> validate_action(const EndAlgebra& algebra, const GaloisTwistGroup& group) {
    std::vector<std::string> issues;
    const int m = group.order();
    const int d = algebra.dim();
    if (m == 0) return {"group: empty multiplication table"};
    if (static_cast<int>(group.labels.size()) != m) issues.push_back("group: label count mismatch");
    if (static_cast<int>(group.actions.size()) != m) {
        issues.push_back("group: action count mismatch");
        return issues;
    }
    for (int s = 0; s < m; ++s) {
        if (static_cast<int>(group.table[s].size()) != m) {
            issues.push_back("group: ragged multiplication table");
            return issues;
        }
        for (int t = 0; t < m; ++t)
            if (group.table[s][t] < 0 || group.table[s][t] >= m) {
                issues.push_back("group: table entry out of range");
                return issues;
            }
    }
    for (int s = 0; s < m; ++s) {
        if (group.table[0][s] != s || group.table[s][0] != s)
            issues.push_back("group: element 0 is not an identity");
    }
    for (int s = 0; s < m; ++s) {
        bool has_inverse = false;
        for (int t = 0; t < m; ++t)
            if (group.table[s][t] == 0 && group.table[t][s] == 0) has_inverse = true;
        if (!has_inverse) issues.push_back("group: element " + std::to_string(s) + " has no inverse");
    }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                if (group.table[group.table[a][b]][c] != group.table[a][group.table[b][c]]) {
                    issues.push_back("group: multiplication not associative");
                    a = b = c = m;  // break all loops
                }

    for (int s = 0; s < m; ++s)
        if (group.actions[s].rows() != d || group.actions[s].cols() != d)
            issues.push_back("action " + std::to_string(s) + ": matrix is not " + std::to_string(d) +
                             "x" + std::to_string(d));
    for (const auto& issue : issues)
        if (!issue.empty()) break;
    if (!issues.empty()) return issues;

    const RationalMatrix idm = RationalMatrix::identity(d);
    if (group.actions[0] != idm) issues.push_back("action: identity element must act trivially");
    for (int s = 0; s < m; ++s)
        for (int t = 0; t < m; ++t)
            if (group.actions[group.table[s][t]] != group.actions[s] * group.actions[t]) {
                issues.push_back("action: not a homomorphism at (" + std::to_string(s) + "," +
                                 std::to_string(t) + ")");
                s = t = m;
            }

    // Coordinates of the algebra identity (basis element 0 by construction).
    std::vector<Rational> one(d, Rational(0));
    one[0] = 1;
    for (int s = 0; s < m; ++s) {
        const RationalMatrix& act = group.actions[s];
        // Must fix the unit.
        std::vector<Rational> img_one(d, Rational(0));
        for (int k = 0; k < d; ++k) img_one[k] = act.at(k, 0);
        if (img_one != one) {
            issues.push_back("action " + std::to_string(s) + ": does not fix the algebra unit");
            continue;
        }
        // Must be an algebra automorphism: compare images of products.
        std::vector<RationalMatrix> img(d, RationalMatrix(algebra.ambient_dim(), algebra.ambient_dim()));
        for (int j = 0; j < d; ++j) {
            std::vector<Rational> col(d);
            for (int k = 0; k < d; ++k) col[k] = act.at(k, j);
            img[j] = algebra.from_coordinates(col);
        }
        bool ok = true;
        for (int i = 0; i < d && ok; ++i)
            for (int j = 0; j < d && ok; ++j) {
                RationalMatrix lhs = img[i] * img[j];
                std::vector<Rational> prod_coords(d);
                for (int k = 0; k < d; ++k) prod_coords[k] = algebra.structure_constant(i, j, k);
                RationalMatrix rhs(algebra.ambient_dim(), algebra.ambient_dim());
                for (int k = 0; k < d; ++k)
                    if (prod_coords[k] != 0) rhs = rhs + img[k] * prod_coords[k];
                if (lhs != rhs) {
                    issues.push_back("action " + std::to_string(s) +
                                     ": not multiplicative on basis pair (" + std::to_string(i) +
                                     "," + std::to_string(j) + ")");
                    ok = false;
                }
            }
        if (rank(act) != d)
            issues.push_back("action " + std::to_string(s) + ": matrix is singular");
    }

    if (group.discs) {
        const auto& ds = *group.discs;
        if (m != (1 << static_cast<int>(ds.size())))
            issues.push_back("descriptor: group order is not 2^r");
        else
            for (int s = 0; s < m; ++s)
                for (int t = 0; t < m; ++t)
                    if (group.table[s][t] != (s ^ t)) {
                        issues.push_back("descriptor: multiplication is not bitwise XOR");
                        s = t = m;
                    }
        for (long long dv : ds) {
            if (dv == 0 || dv == 1 || !is_squarefree(dv))
                issues.push_back("descriptor: entries must be squarefree and != 0, 1");
        }
    }
    return issues;
}

namespace {

long long mulmod(long long a, long long b, long long p) {
    return static_cast<long long>(static_cast<__int128>(a) * b % p);
}

long long powmod(long long a, long long e, long long p) {
    long long r = 1 % p;
    a %= p;
    if (a < 0) a += p;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

int kronecker_symbol(long long a, long long p) {
    if (p <= 2 || !is_prime(p)) throw std::invalid_argument("kronecker: p must be an odd prime");
    long long r = a % p;
    if (r < 0) r += p;
    if (r == 0) return 0;
    long long e = powmod(r, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

int frobenius_class(long long p, const GaloisTwistGroup& group) {
    if (!group.discs)
        throw std::invalid_argument("frobenius_class: group has no field descriptor");
    if (p <= 2 || !is_prime(p))
        throw std::invalid_argument("frobenius_class: p must be an odd prime");
    const auto& ds = *group.discs;
    int cls = 0;
    for (size_t i = 0; i < ds.size(); ++i) {
        int chi = kronecker_symbol(ds[i], p);
        if (chi == 0) throw std::domain_error("frobenius_class: prime ramifies in descriptor field");
        if (chi == -1) cls |= 1 << i;
    }
    return cls;
}

}  // namespace stlab
