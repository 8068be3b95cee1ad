// SPDX-License-Identifier: Apache-2.0
#include "stlab/twist.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <climits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "stlab/philox.hpp"

namespace stlab {

std::vector<RationalMatrix> TwistSpace::basis_matrices() const {
    const int n2 = linear_basis.ambient;
    int n = 0;
    while (n * n < n2) ++n;
    std::vector<RationalMatrix> out;
    out.reserve(linear_basis.vectors.size());
    for (const auto& v : linear_basis.vectors) out.push_back(RationalMatrix::from_vec(v, n, n));
    return out;
}

SubspaceBasis lefschetz_lie_algebra(const PolarizedSpace& space, const EndAlgebra& algebra) {
    const int n = space.dim();
    if (algebra.ambient_dim() != n)
        throw std::invalid_argument("lefschetz_lie_algebra: algebra/space dimension mismatch");
    const RationalMatrix psi = space.pairing();
    std::vector<std::function<RationalMatrix(const RationalMatrix&)>> maps;
    maps.push_back([psi](const RationalMatrix& x) { return x.transpose() * psi + psi * x; });
    for (const auto& beta : algebra.basis())
        maps.push_back([beta](const RationalMatrix& x) { return x * beta - beta * x; });
    auto mats = common_kernel(maps, n);
    SubspaceBasis basis;
    basis.ambient = n * n;
    for (const auto& m : mats) basis.vectors.push_back(m.vec());
    return basis;
}

SubspaceBasis twist_space_from_pairs(
    int n, const std::vector<std::pair<RationalMatrix, RationalMatrix>>& beta_image_pairs) {
    std::vector<std::function<RationalMatrix(const RationalMatrix&)>> maps;
    for (const auto& [beta, image] : beta_image_pairs) {
        if (beta.rows() != n || beta.cols() != n || image.rows() != n || image.cols() != n)
            throw std::invalid_argument("twist_space: pair shape mismatch");
        maps.push_back([beta, image](const RationalMatrix& g) { return g * beta - image * g; });
    }
    if (maps.empty())
        maps.push_back([](const RationalMatrix& g) { return g - g; });  // no constraint
    auto mats = common_kernel(maps, n);
    SubspaceBasis basis;
    basis.ambient = n * n;
    for (const auto& m : mats) basis.vectors.push_back(m.vec());
    return basis;
}

TwistSpace twist_linear_space(const PolarizedSpace& space, const EndAlgebra& algebra,
                              const GaloisTwistGroup& group, int tau) {
    const int n = space.dim();
    if (algebra.ambient_dim() != n)
        throw std::invalid_argument("twist_linear_space: algebra/space dimension mismatch");
    if (tau < 0 || tau >= group.order())
        throw std::invalid_argument("twist_linear_space: unknown group element");
    const int d = algebra.dim();
    const RationalMatrix& act = group.actions[tau];
    if (act.rows() != d || act.cols() != d)
        throw std::invalid_argument("twist_linear_space: action dimension mismatch");
    std::vector<std::pair<RationalMatrix, RationalMatrix>> pairs;
    pairs.reserve(d);
    for (int j = 0; j < d; ++j) {
        std::vector<Rational> img_coords(d);
        for (int k = 0; k < d; ++k) img_coords[k] = act.at(k, j);
        pairs.emplace_back(algebra.basis()[j], algebra.from_coordinates(img_coords));
    }
    TwistSpace t;
    t.tau = tau;
    t.tau_label = group.labels.empty() ? std::to_string(tau) : group.labels[tau];
    t.linear_basis = twist_space_from_pairs(n, pairs);
    return t;
}

namespace {

using Cplx = std::complex<double>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

template <typename Scalar>
struct IsometryProblem {
    std::vector<Mat<Scalar>> basis;
    Mat<Scalar> psi;
    int n = 0;

    Mat<Scalar> assemble(const Vec<Scalar>& x) const {
        Mat<Scalar> g = Mat<Scalar>::Zero(n, n);
        for (int i = 0; i < static_cast<int>(basis.size()); ++i) g += x(i) * basis[i];
        return g;
    }

    Vec<Scalar> residual_vec(const Mat<Scalar>& g) const {
        Mat<Scalar> r = g.transpose() * psi * g - psi;
        return Eigen::Map<Vec<Scalar>>(r.data(), n * n);
    }

    double residual_inf(const Mat<Scalar>& g) const {
        return (g.transpose() * psi * g - psi).cwiseAbs().maxCoeff();
    }

    // d/dx_i of vec(g^T Psi g - Psi); the map is holomorphic, so the same
    // formula serves the complex mode.
    Mat<Scalar> jacobian(const Mat<Scalar>& g) const {
        const int k = static_cast<int>(basis.size());
        Mat<Scalar> jac(n * n, k);
        for (int i = 0; i < k; ++i) {
            Mat<Scalar> col = basis[i].transpose() * psi * g + g.transpose() * psi * basis[i];
            jac.col(i) = Eigen::Map<Vec<Scalar>>(col.data(), n * n);
        }
        return jac;
    }
};

template <typename Scalar>
Scalar draw_start(PhiloxStream& rng);

template <>
double draw_start<double>(PhiloxStream& rng) {
    return 2.0 * rng.next_uniform() - 1.0;
}

template <>
Cplx draw_start<Cplx>(PhiloxStream& rng) {
    const double re = 2.0 * rng.next_uniform() - 1.0;
    const double im = 2.0 * rng.next_uniform() - 1.0;
    return {re, im};
}

template <typename Scalar>
std::optional<IsometryWitness> run_restart(const IsometryProblem<Scalar>& prob, uint64_t seed,
                                           int restart, int max_iter, double tol) {
    const int k = static_cast<int>(prob.basis.size());
    PhiloxStream rng(seed, static_cast<uint64_t>(restart));
    Vec<Scalar> x(k);
    for (int i = 0; i < k; ++i) x(i) = draw_start<Scalar>(rng);

    Mat<Scalar> g = prob.assemble(x);
    double f2 = prob.residual_vec(g).squaredNorm();
    for (int iter = 0; iter < max_iter; ++iter) {
        if (prob.residual_inf(g) < tol) break;
        Vec<Scalar> f = prob.residual_vec(g);
        Mat<Scalar> jac = prob.jacobian(g);
        Eigen::CompleteOrthogonalDecomposition<Mat<Scalar>> cod(jac);
        Vec<Scalar> step = cod.solve(-f);
        if (!step.allFinite()) break;
        double alpha = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            Vec<Scalar> xn = x + alpha * step;
            Mat<Scalar> gn = prob.assemble(xn);
            double f2n = prob.residual_vec(gn).squaredNorm();
            if (f2n < f2) {
                x = xn;
                g = gn;
                f2 = f2n;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
    }
    if (prob.residual_inf(g) >= tol) return std::nullopt;

    IsometryWitness w;
    w.coefficients.resize(k);
    for (int i = 0; i < k; ++i) w.coefficients[i] = Cplx(x(i));
    w.matrix.resize(static_cast<size_t>(prob.n) * prob.n);
    for (int i = 0; i < prob.n; ++i)
        for (int j = 0; j < prob.n; ++j) w.matrix[static_cast<size_t>(i) * prob.n + j] = Cplx(g(i, j));
    w.residual = prob.residual_inf(g);
    w.restart_index = restart;
    return w;
}

template <typename Scalar>
std::optional<IsometryWitness> search_parallel(const IsometryProblem<Scalar>& prob,
                                               const SearchBudget& budget) {
    const int threads = std::max(1, budget.parallelism);
    std::atomic<int> best(INT_MAX);
    std::mutex mu;
    std::map<int, IsometryWitness> hits;
    auto worker = [&](int tid) {
        for (int r = tid; r < budget.restarts; r += threads) {
            if (best.load(std::memory_order_relaxed) < r) continue;
            auto w = run_restart(prob, budget.seed, r, budget.max_iterations, budget.tolerance);
            if (!w) continue;
            std::lock_guard<std::mutex> lock(mu);
            hits[r] = *w;
            int cur = best.load();
            while (r < cur && !best.compare_exchange_weak(cur, r)) {
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    if (hits.empty()) return std::nullopt;
    return hits.begin()->second;  // lowest restart index wins, thread-count independent
}

template <typename Scalar>
IsometryProblem<Scalar> make_problem(const TwistSpace& twist, const PolarizedSpace& space) {
    IsometryProblem<Scalar> prob;
    prob.n = space.dim();
    prob.psi = Mat<Scalar>::Zero(prob.n, prob.n);
    for (int i = 0; i < prob.n; ++i)
        for (int j = 0; j < prob.n; ++j) prob.psi(i, j) = Scalar(to_double(space.pairing().at(i, j)));
    for (const auto& v : twist.linear_basis.vectors) {
        Mat<Scalar> b = Mat<Scalar>::Zero(prob.n, prob.n);
        for (int i = 0; i < prob.n; ++i)
            for (int j = 0; j < prob.n; ++j) b(i, j) = Scalar(to_double(v[static_cast<size_t>(i) * prob.n + j]));
        prob.basis.push_back(std::move(b));
    }
    return prob;
}

// All principal minors nonneg <=> positive semidefinite (exact, small k).
bool is_psd_rational(const RationalMatrix& m) {
    const int k = m.rows();
    for (int mask = 1; mask < (1 << k); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < k; ++i)
            if (mask & (1 << i)) idx.push_back(i);
        RationalMatrix sub(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
        for (size_t a = 0; a < idx.size(); ++a)
            for (size_t b = 0; b < idx.size(); ++b) sub.at(a, b) = m.at(idx[a], idx[b]);
        if (determinant(sub) < 0) return false;
    }
    return true;
}

}  // namespace

std::optional<IsometryWitness> find_isometry_in_twist(const TwistSpace& twist,
                                                      const PolarizedSpace& space, SearchMode mode,
                                                      const SearchBudget& budget) {
    const int n = space.dim();
    if (twist.linear_basis.ambient != n * n)
        throw std::invalid_argument("find_isometry_in_twist: twist/space dimension mismatch");

    // Exact shortcut: the identity, when the twist space contains it.
    auto id_coords = solve_coordinates(twist.linear_basis.vectors, RationalMatrix::identity(n).vec());
    if (id_coords) {
        IsometryWitness w;
        w.coefficients.resize(id_coords->size());
        for (size_t i = 0; i < id_coords->size(); ++i) w.coefficients[i] = Cplx(to_double((*id_coords)[i]));
        w.matrix.assign(static_cast<size_t>(n) * n, Cplx(0.0));
        for (int i = 0; i < n; ++i) w.matrix[static_cast<size_t>(i) * n + i] = Cplx(1.0);
        w.residual = 0.0;
        w.restart_index = -1;
        w.exact = true;
        return w;
    }
    if (twist.dim() == 0) return std::nullopt;

    if (mode == SearchMode::Real) {
        auto prob = make_problem<double>(twist, space);
        return search_parallel(prob, budget);
    }
    auto prob = make_problem<Cplx>(twist, space);
    return search_parallel(prob, budget);
}

bool certify_real_empty(const TwistSpace& twist, const PolarizedSpace& space) {
    const int k = twist.dim();
    if (k > 3) return false;  // obstruction test only attempted in low dimension
    const int n = space.dim();
    const RationalMatrix& psi = space.pairing();
    auto basis = twist.basis_matrices();
    std::vector<RationalMatrix> bpb;  // B_a^T Psi B_b, row-major over (a,b)
    bpb.reserve(static_cast<size_t>(k) * k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) bpb.push_back(basis[a].transpose() * psi * basis[b]);
    const Rational half = make_rational(1, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RationalMatrix form(k, k);
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    form.at(a, b) = (bpb[static_cast<size_t>(a) * k + b].at(i, j) +
                                     bpb[static_cast<size_t>(b) * k + a].at(i, j)) *
                                    half;
            const Rational& target = psi.at(i, j);
            if (target < 0 && is_psd_rational(form)) return true;
            if (target > 0 && is_psd_rational(-form)) return true;
        }
    return false;
}

namespace {

RationalMatrix matrix_unit(int s, int a, int b) {
    RationalMatrix e(s, s);
    e.at(a, b) = 1;
    return e;
}

RationalMatrix action_image(const EndAlgebra& algebra, const RationalMatrix& act, int j) {
    const int d = algebra.dim();
    std::vector<Rational> coords(d);
    for (int k = 0; k < d; ++k) coords[k] = act.at(k, j);
    return algebra.from_coordinates(coords);
}

}  // namespace

PowerProductReport power_product_check(const PolarizedSpace& space, const EndAlgebra& algebra,
                                       const GaloisTwistGroup& group, int tau, int s) {
    if (s < 1) throw std::invalid_argument("power_product_check: s must be >= 1");
    if (tau < 0 || tau >= group.order())
        throw std::invalid_argument("power_product_check: unknown group element");
    const int n = space.dim();
    const int d = algebra.dim();
    const RationalMatrix& act = group.actions[tau];

    PowerProductReport rep;
    rep.tau = tau;
    rep.mode = "power";
    rep.s = s;

    const int base_dim = twist_linear_space(space, algebra, group, tau).dim();
    rep.dims.emplace_back("base_twist_dim", base_dim);

    const RationalMatrix id_s = RationalMatrix::identity(s);
    const RationalMatrix id_n = RationalMatrix::identity(n);
    PolarizedSpace power_space(space.weight(), id_s.kronecker(space.pairing()));

    // M_s(D) generated by diagonal copies of D and the matrix units.
    std::vector<RationalMatrix> gens;
    for (const auto& beta : algebra.basis()) gens.push_back(id_s.kronecker(beta));
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) gens.push_back(matrix_unit(s, a, b).kronecker(id_n));
    auto closure = algebra_closure(gens, n * s);
    rep.dims.emplace_back("algebra_dim", static_cast<int>(closure.size()));
    rep.dims.emplace_back("algebra_dim_expected", s * s * d);

    // Spanning pairs E_ab x beta_j with entrywise twisted images.
    SpanTracker closure_span(n * s * n * s);
    for (const auto& m : closure) closure_span.insert(m.vec());
    bool span_match = static_cast<int>(closure.size()) == s * s * d;
    std::vector<std::pair<RationalMatrix, RationalMatrix>> pairs;
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
            const RationalMatrix unit = matrix_unit(s, a, b);
            for (int j = 0; j < d; ++j) {
                RationalMatrix beta = unit.kronecker(algebra.basis()[j]);
                if (!closure_span.contains(beta.vec())) span_match = false;
                pairs.emplace_back(beta, unit.kronecker(action_image(algebra, act, j)));
            }
        }
    const int power_dim = twist_space_from_pairs(n * s, pairs).dim();
    rep.dims.emplace_back("power_twist_dim", power_dim);

    rep.pass = span_match && power_dim == base_dim;
    return rep;
}

PowerProductReport power_product_check(const std::vector<SumFactor>& factors, int tau) {
    if (factors.empty()) throw std::invalid_argument("power_product_check: empty factor list");
    const GaloisTwistGroup& g0 = *factors.front().group;
    if (tau < 0 || tau >= g0.order())
        throw std::invalid_argument("power_product_check: unknown group element");
    for (const auto& f : factors) {
        if (f.space->weight() != factors.front().space->weight())
            throw std::invalid_argument("power_product_check: factors must share the weight");
        if (f.group->table != g0.table)
            throw std::invalid_argument("power_product_check: factors must share the group");
        if (f.algebra->ambient_dim() != f.space->dim())
            throw std::invalid_argument("power_product_check: factor algebra/space mismatch");
    }

    PowerProductReport rep;
    rep.tau = tau;
    rep.mode = "direct-sum";
    rep.s = static_cast<int>(factors.size());

    int n_total = 0, d_total = 0;
    for (const auto& f : factors) {
        n_total += f.space->dim();
        d_total += f.algebra->dim();
    }
    RationalMatrix pairing(n_total, n_total);
    int off = 0;
    for (const auto& f : factors) {
        const int ni = f.space->dim();
        for (int i = 0; i < ni; ++i)
            for (int j = 0; j < ni; ++j) pairing.at(off + i, off + j) = f.space->pairing().at(i, j);
        off += ni;
    }
    PolarizedSpace sum_space(factors.front().space->weight(), pairing);

    auto embed = [&](const RationalMatrix& m, int offset) {
        RationalMatrix out(n_total, n_total);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) out.at(offset + i, offset + j) = m.at(i, j);
        return out;
    };

    std::vector<RationalMatrix> gens;
    std::vector<std::pair<RationalMatrix, RationalMatrix>> pairs;
    int expected_sum = 0;
    off = 0;
    for (size_t fi = 0; fi < factors.size(); ++fi) {
        const auto& f = factors[fi];
        const int dim_i = twist_linear_space(*f.space, *f.algebra, *f.group, tau).dim();
        rep.dims.emplace_back("factor" + std::to_string(fi) + "_twist_dim", dim_i);
        expected_sum += dim_i;
        const RationalMatrix& act = f.group->actions[tau];
        for (int j = 0; j < f.algebra->dim(); ++j) {
            RationalMatrix beta = embed(f.algebra->basis()[j], off);
            gens.push_back(beta);
            pairs.emplace_back(beta, embed(action_image(*f.algebra, act, j), off));
        }
        off += f.space->dim();
    }
    auto closure = algebra_closure(gens, n_total);
    rep.dims.emplace_back("algebra_dim", static_cast<int>(closure.size()));
    rep.dims.emplace_back("algebra_dim_expected", d_total);

    const int sum_dim = twist_space_from_pairs(n_total, pairs).dim();
    rep.dims.emplace_back("sum_twist_dim", sum_dim);
    rep.dims.emplace_back("sum_twist_dim_expected", expected_sum);

    rep.pass = static_cast<int>(closure.size()) == d_total && sum_dim == expected_sum;
    return rep;
}

SurjectionReport component_surjection_report(const PolarizedSpace& space, const EndAlgebra& algebra,
                                             const GaloisTwistGroup& group,
                                             const SearchBudget& budget) {
    SurjectionReport report;
    const int lie_dim = lefschetz_lie_algebra(space, algebra).dim();
    bool all_complex = true;
    bool any_empty = false;
    for (int tau = 0; tau < group.order(); ++tau) {
        TwistComponentReport comp;
        comp.tau = tau;
        comp.tau_label = group.labels[tau];
        TwistSpace twist = twist_linear_space(space, algebra, group, tau);
        comp.twist_dim = twist.dim();
        comp.lie_dim_at_identity = lie_dim;
        comp.real_representative = find_isometry_in_twist(twist, space, SearchMode::Real, budget);
        if (comp.real_representative) {
            comp.complex_representative = comp.real_representative;  // real points are complex points
        } else {
            comp.complex_representative =
                find_isometry_in_twist(twist, space, SearchMode::Complex, budget);
            comp.real_empty_certified = certify_real_empty(twist, space);
        }
        if (comp.complex_representative)
            comp.nonempty_over_C = "yes";
        else if (comp.real_empty_certified)
            comp.nonempty_over_C = "no-evidence";
        else
            comp.nonempty_over_C = "undetermined";
        if (comp.twist_dim == 0) any_empty = true;
        if (comp.nonempty_over_C != "yes") all_complex = false;
        report.components.push_back(std::move(comp));
    }
    if (all_complex)
        report.verdict = "surjective (complex points)";
    else if (any_empty)
        report.verdict = "not surjective (empty twist component)";
    else
        report.verdict = "undetermined";
    return report;
}

}  // namespace stlab
