// SPDX-License-Identifier: Apache-2.0
#include "stlab/haar.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <thread>

namespace stlab {

namespace {

using Cplx = std::complex<double>;

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_component(CompactGroup g, Component c) {
    if (c == Component::Nontrivial && g != CompactGroup::NU1)
        throw std::invalid_argument("component 'nontrivial' is only defined for NU1");
}

Eigen::Matrix2cd u1_element(double theta) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = std::polar(1.0, theta);
    m(1, 1) = std::polar(1.0, -theta);
    return m;
}

Eigen::Matrix2cd nu1_reflection(double theta) {
    // antidiag(w, -conj(w)) in SU(2); trace 0 for every w.
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    const Cplx w = std::polar(1.0, theta);
    m(0, 1) = w;
    m(1, 0) = -std::conj(w);
    return m;
}

Eigen::Matrix2cd su2_element(PhiloxStream& rng) {
    // Uniform point on S^3 -> unit quaternion -> SU(2).
    double q[4], norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (double& v : q) {
            v = rng.next_normal();
            norm2 += v * v;
        }
    } while (norm2 < 1e-24);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : q) v *= inv;
    Eigen::Matrix2cd m;
    m(0, 0) = Cplx(q[0], q[1]);
    m(0, 1) = Cplx(q[2], q[3]);
    m(1, 0) = Cplx(-q[2], q[3]);
    m(1, 1) = Cplx(q[0], -q[1]);
    return m;
}

struct Quat {
    double a = 0, b = 0, c = 0, d = 0;
    Quat conj() const { return {a, -b, -c, -d}; }
    double norm2() const { return a * a + b * b + c * c + d * d; }
    Quat operator+(const Quat& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Quat operator-(const Quat& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Quat operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    Quat operator*(const Quat& o) const {
        return {a * o.a - b * o.b - c * o.c - d * o.d, a * o.b + b * o.a + c * o.d - d * o.c,
                a * o.c - b * o.d + c * o.a + d * o.b, a * o.d + b * o.c - c * o.b + d * o.a};
    }
};

Eigen::Matrix4cd usp4_element(PhiloxStream& rng) {
    // Gaussian 2x2 quaternion matrix, orthonormalized columns (quaternionic
    // Gram-Schmidt), embedded q = a+bi+cj+dk -> [[a+bi, c+di], [-c+di, a-bi]].
    // The result is unitary and preserves J = diag(J2, J2).
    while (true) {
        Quat m[2][2];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                m[i][j].a = rng.next_normal();
                m[i][j].b = rng.next_normal();
                m[i][j].c = rng.next_normal();
                m[i][j].d = rng.next_normal();
            }
        // Column 0 normalization.
        double n0 = m[0][0].norm2() + m[1][0].norm2();
        if (n0 < 1e-24) continue;
        const double inv0 = 1.0 / std::sqrt(n0);
        m[0][0] = m[0][0] * inv0;
        m[1][0] = m[1][0] * inv0;
        // Column 1 -= col0 * <col0, col1>  (inner product conj-linear in the
        // first slot; columns span a right H-module).
        Quat ip = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
        m[0][1] = m[0][1] - m[0][0] * ip;
        m[1][1] = m[1][1] - m[1][0] * ip;
        double n1 = m[0][1].norm2() + m[1][1].norm2();
        if (n1 < 1e-24) continue;
        const double inv1 = 1.0 / std::sqrt(n1);
        m[0][1] = m[0][1] * inv1;
        m[1][1] = m[1][1] * inv1;

        Eigen::Matrix4cd out;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const Quat& q = m[i][j];
                out(2 * i, 2 * j) = Cplx(q.a, q.b);
                out(2 * i, 2 * j + 1) = Cplx(q.c, q.d);
                out(2 * i + 1, 2 * j) = Cplx(-q.c, q.d);
                out(2 * i + 1, 2 * j + 1) = Cplx(q.a, -q.b);
            }
        return out;
    }
}

// Trapezoid rule on a periodic smooth integrand over [a,b], refined until
// stable; exact once the node count exceeds the trigonometric degree.
double periodic_integral(const std::function<double(double)>& f, double a, double b) {
    int n = 64;
    auto eval = [&](int nodes) {
        double s = 0.0;
        const double h = (b - a) / nodes;
        for (int i = 0; i < nodes; ++i) s += f(a + i * h);
        return s * h;
    };
    double prev = eval(n);
    for (int round = 0; round < 14; ++round) {
        n *= 2;
        double cur = eval(n);
        if (std::abs(cur - prev) <= 1e-12 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 28);
}

std::vector<double> u1_moments(int k_max) {
    std::vector<double> m(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        m[k] = periodic_integral([k](double th) { return std::pow(2.0 * std::cos(th), k); }, 0.0,
                                 2.0 * kPi) /
               (2.0 * kPi);
    }
    return m;
}

std::vector<double> su2_moments(int k_max) {
    std::vector<double> m(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        // Even extension is smooth and 2pi-periodic, so the trapezoid rule on
        // [0, pi] keeps spectral accuracy.
        m[k] = periodic_integral(
                   [k](double th) {
                       const double s = std::sin(th);
                       return std::pow(2.0 * std::cos(th), k) * s * s;
                   },
                   0.0, kPi) *
               (2.0 / kPi);
    }
    return m;
}

double usp4_weight(double t1, double t2) {
    const double dc = 2.0 * std::cos(t1) - 2.0 * std::cos(t2);
    const double s1 = 2.0 * std::sin(t1), s2 = 2.0 * std::sin(t2);
    return dc * dc * s1 * s1 * s2 * s2;
}

std::vector<double> usp4_moments(int k_max) {
    // Tensor trapezoid grid; integrand is a trig polynomial of degree
    // <= k_max + 4 in each variable, so 256 nodes per axis is exact.
    const int n = 256;
    const double h = kPi / n;
    std::vector<double> m(k_max + 1, 0.0);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t1 = (i + 0.5) * h;
        for (int j = 0; j < n; ++j) {
            const double t2 = (j + 0.5) * h;
            const double w = usp4_weight(t1, t2);
            z += w;
            const double tr = 2.0 * std::cos(t1) + 2.0 * std::cos(t2);
            double pw = w;
            m[0] += w;
            for (int k = 1; k <= k_max; ++k) {
                pw *= tr;
                m[k] += pw;
            }
        }
    }
    // Normalization enforced via M_0 = 1 rather than a hard-coded constant.
    for (double& v : m) v /= z;
    return m;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

const char* compact_group_name(CompactGroup g) {
    switch (g) {
        case CompactGroup::U1: return "U1";
        case CompactGroup::NU1: return "NU1";
        case CompactGroup::SU2: return "SU2";
        case CompactGroup::SU2xSU2: return "SU2xSU2";
        case CompactGroup::USp4: return "USp4";
    }
    return "?";
}

const char* component_name(Component c) {
    switch (c) {
        case Component::Identity: return "identity";
        case Component::Nontrivial: return "nontrivial";
        case Component::Mixture: return "mixture";
    }
    return "?";
}

CompactGroup parse_compact_group(const std::string& name) {
    if (name == "U1") return CompactGroup::U1;
    if (name == "NU1") return CompactGroup::NU1;
    if (name == "SU2") return CompactGroup::SU2;
    if (name == "SU2xSU2") return CompactGroup::SU2xSU2;
    if (name == "USp4") return CompactGroup::USp4;
    throw std::invalid_argument("unknown compact group '" + name + "'");
}

Component parse_component(const std::string& name) {
    if (name == "identity") return Component::Identity;
    if (name == "nontrivial") return Component::Nontrivial;
    if (name == "mixture") return Component::Mixture;
    throw std::invalid_argument("unknown component selector '" + name + "'");
}

int trace_dim(CompactGroup g) {
    switch (g) {
        case CompactGroup::U1:
        case CompactGroup::NU1:
        case CompactGroup::SU2: return 2;
        case CompactGroup::SU2xSU2:
        case CompactGroup::USp4: return 4;
    }
    return 0;
}

Eigen::MatrixXcd sample_element(CompactGroup g, Component component, PhiloxStream& rng) {
    require_component(g, component);
    switch (g) {
        case CompactGroup::U1:
            return u1_element(2.0 * kPi * rng.next_uniform());
        case CompactGroup::NU1: {
            Component c = component;
            if (c == Component::Mixture)
                c = rng.next_uniform() < 0.5 ? Component::Identity : Component::Nontrivial;
            const double theta = 2.0 * kPi * rng.next_uniform();
            return c == Component::Identity ? u1_element(theta) : nu1_reflection(theta);
        }
        case CompactGroup::SU2:
            return su2_element(rng);
        case CompactGroup::SU2xSU2: {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
            m.block<2, 2>(0, 0) = su2_element(rng);
            m.block<2, 2>(2, 2) = su2_element(rng);
            return m;
        }
        case CompactGroup::USp4:
            return usp4_element(rng);
    }
    throw std::logic_error("unreachable");
}

MomentVector trace_moments_quadrature(CompactGroup g, Component component, int k_max) {
    require_component(g, component);
    if (k_max < 0 || k_max > 32)
        throw std::invalid_argument("trace_moments_quadrature: k_max must be in [0, 32]");
    MomentVector out;
    out.k_max = k_max;
    out.method = "quadrature";
    out.stderrs.assign(k_max + 1, 0.0);
    switch (g) {
        case CompactGroup::U1:
            out.values = u1_moments(k_max);
            break;
        case CompactGroup::NU1: {
            if (component == Component::Identity) {
                out.values = u1_moments(k_max);
            } else if (component == Component::Nontrivial) {
                out.values.assign(k_max + 1, 0.0);
                out.values[0] = 1.0;
            } else {
                out.values = u1_moments(k_max);
                for (int k = 1; k <= k_max; ++k) out.values[k] *= 0.5;
            }
            break;
        }
        case CompactGroup::SU2:
            out.values = su2_moments(k_max);
            break;
        case CompactGroup::SU2xSU2: {
            auto su2 = su2_moments(k_max);
            out.values.assign(k_max + 1, 0.0);
            for (int k = 0; k <= k_max; ++k) {
                double s = 0.0;
                for (int j = 0; j <= k; ++j) s += binomial(k, j) * su2[j] * su2[k - j];
                out.values[k] = s;
            }
            break;
        }
        case CompactGroup::USp4:
            out.values = usp4_moments(k_max);
            break;
    }
    return out;
}

MomentVector trace_moments_mc(CompactGroup g, Component component, int k_max, long long n_samples,
                              uint64_t seed, int parallelism) {
    require_component(g, component);
    if (k_max < 0 || k_max > 32)
        throw std::invalid_argument("trace_moments_mc: k_max must be in [0, 32]");
    if (n_samples < 1000) throw std::invalid_argument("trace_moments_mc: need at least 1000 samples");

    constexpr long long kChunk = 4096;
    const long long n_chunks = (n_samples + kChunk - 1) / kChunk;
    const int width = 2 * (k_max + 1);  // sums of t^k and of t^{2k}
    std::vector<std::vector<double>> partial(static_cast<size_t>(n_chunks));

    auto run_chunk = [&](long long c) {
        std::vector<double> acc(width, 0.0);
        const long long lo = c * kChunk;
        const long long hi = std::min(n_samples, lo + kChunk);
        for (long long i = lo; i < hi; ++i) {
            PhiloxStream rng(seed, static_cast<uint64_t>(i));
            const double t = sample_element(g, component, rng).trace().real();
            double pw = 1.0;
            for (int k = 0; k <= k_max; ++k) {
                acc[k] += pw;
                acc[k_max + 1 + k] += pw * pw;
                pw *= t;
            }
        }
        partial[static_cast<size_t>(c)] = std::move(acc);
    };

    const int threads = std::max(1, parallelism);
    if (threads == 1) {
        for (long long c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (long long c = t; c < n_chunks; c += threads) run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }

    // Pairwise reduction in chunk order: result independent of thread count.
    std::vector<std::vector<double>> level = std::move(partial);
    while (level.size() > 1) {
        std::vector<std::vector<double>> next;
        next.reserve((level.size() + 1) / 2);
        for (size_t i = 0; i + 1 < level.size(); i += 2) {
            std::vector<double> s(width);
            for (int w = 0; w < width; ++w) s[w] = level[i][w] + level[i + 1][w];
            next.push_back(std::move(s));
        }
        if (level.size() % 2) next.push_back(std::move(level.back()));
        level = std::move(next);
    }
    const std::vector<double>& total = level.front();

    MomentVector out;
    out.k_max = k_max;
    out.method = "mc";
    out.values.resize(k_max + 1);
    out.stderrs.resize(k_max + 1);
    const double n = static_cast<double>(n_samples);
    for (int k = 0; k <= k_max; ++k) {
        const double mean = total[k] / n;
        out.values[k] = mean;
        double var = 0.0;
        if (n_samples > 1) var = std::max(0.0, (total[k_max + 1 + k] - n * mean * mean) / (n - 1.0));
        out.stderrs[k] = std::sqrt(var / n);
    }
    return out;
}

namespace {

double u1_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 1.0 - std::acos(0.5 * x) / kPi;
}

double su2_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + (0.25 * x * std::sqrt(4.0 - x * x) + std::asin(0.5 * x)) / kPi;
}

double su2_density(double x) {
    if (x <= -2.0 || x >= 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * kPi);
}

double su2xsu2_cdf(double x) {
    if (x <= -4.0) return 0.0;
    if (x >= 4.0) return 1.0;
    auto integrand = [x](double w) { return su2_density(w) * su2_cdf(x - w); };
    // Kinks of the inner CDF at w = x -+ 2; split for smooth panels.
    std::vector<double> cuts = {-2.0};
    for (double c : {x - 2.0, x + 2.0})
        if (c > -2.0 && c < 2.0) cuts.push_back(c);
    cuts.push_back(2.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        total += adaptive_simpson(integrand, cuts[i], cuts[i + 1], 3e-9);
    return total;
}

// theta1-antiderivative of (2cos t1 - b)^2 (2 sin t1)^2 at fixed b.
double usp4_inner_antiderivative(double th, double b) {
    const double s = std::sin(th);
    return 2.0 * th - 0.5 * std::sin(4.0 * th) - (16.0 * b / 3.0) * s * s * s + 2.0 * b * b * th -
           b * b * std::sin(2.0 * th);
}

double usp4_unnormalized_cdf(double x) {
    auto integrand = [x](double t2) {
        const double b = 2.0 * std::cos(t2);
        const double c = 0.5 * (x - b);  // need 2cos(t1) <= x - b
        double lo;                       // theta1 lower limit
        if (c >= 1.0)
            lo = 0.0;
        else if (c <= -1.0)
            lo = kPi;
        else
            lo = std::acos(c);
        const double s2 = 2.0 * std::sin(t2);
        return s2 * s2 * (usp4_inner_antiderivative(kPi, b) - usp4_inner_antiderivative(lo, b));
    };
    // Kinks where (x - 2cos t2)/2 crosses +-1; split for smooth panels.
    std::vector<double> cuts = {0.0};
    for (double target : {0.5 * (x - 2.0), 0.5 * (x + 2.0)})
        if (target > -1.0 && target < 1.0) cuts.push_back(std::acos(target));
    cuts.push_back(kPi);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        total += adaptive_simpson(integrand, cuts[i], cuts[i + 1], 2.5e-7);
    return total;
}

double usp4_cdf(double x) {
    if (x <= -4.0) return 0.0;
    if (x >= 4.0) return 1.0;
    static const double z = usp4_unnormalized_cdf(4.0);  // = 8 pi^2 analytically
    return std::min(1.0, std::max(0.0, usp4_unnormalized_cdf(x) / z));
}

}  // namespace

std::function<double(double)> coset_trace_cdf(CompactGroup g, Component component) {
    require_component(g, component);
    switch (g) {
        case CompactGroup::U1:
            return [](double x) { return u1_cdf(x); };
        case CompactGroup::NU1:
            if (component == Component::Identity) return [](double x) { return u1_cdf(x); };
            if (component == Component::Nontrivial)
                return [](double x) { return x >= 0.0 ? 1.0 : 0.0; };
            return [](double x) { return 0.5 * (u1_cdf(x) + (x >= 0.0 ? 1.0 : 0.0)); };
        case CompactGroup::SU2:
            return [](double x) { return su2_cdf(x); };
        case CompactGroup::SU2xSU2:
            return [](double x) { return su2xsu2_cdf(x); };
        case CompactGroup::USp4:
            return [](double x) { return usp4_cdf(x); };
    }
    throw std::logic_error("unreachable");
}

}  // namespace stlab
