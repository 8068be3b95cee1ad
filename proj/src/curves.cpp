// SPDX-License-Identifier: Apache-2.0
#include "stlab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "stlab/matrix.hpp"

namespace stlab {

mpz_class poly_discriminant(const std::vector<long long>& coeffs) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 1) throw std::invalid_argument("discriminant: degree must be >= 1");
    if (coeffs.back() == 0) throw std::invalid_argument("discriminant: zero leading coefficient");
    // f' coefficients, ascending.
    std::vector<long long> deriv(n);
    for (int i = 1; i <= n; ++i) deriv[i - 1] = coeffs[i] * i;
    const int m = n - 1;
    // Sylvester matrix of (f, f'), descending-coefficient convention.
    RationalMatrix syl(n + m, n + m);
    for (int row = 0; row < m; ++row)
        for (int i = 0; i <= n; ++i) syl.at(row, row + i) = make_rational(coeffs[n - i]);
    for (int row = 0; row < n; ++row)
        for (int i = 0; i <= m; ++i) syl.at(m + row, row + i) = make_rational(deriv[m - i]);
    Rational res = determinant(syl);
    Rational disc = res / make_rational(coeffs.back());
    if (n % 4 == 2 || n % 4 == 3) disc = -disc;  // (-1)^{n(n-1)/2}
    if (disc.get_den() != 1) throw std::logic_error("discriminant: non-integral result");
    return disc.get_num();
}

CurveSpec CurveSpec::make(int genus, std::vector<long long> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (genus == 1) {
        if (deg != 3) throw std::invalid_argument("curve: genus 1 requires deg f = 3");
    } else if (genus == 2) {
        if (deg != 5 && deg != 6) throw std::invalid_argument("curve: genus 2 requires deg f in {5,6}");
    } else {
        throw std::invalid_argument("curve: genus must be 1 or 2");
    }
    CurveSpec c;
    c.genus = genus;
    c.f = std::move(coeffs);
    c.disc = poly_discriminant(c.f);
    if (c.disc == 0) throw std::invalid_argument("curve: singular model (disc(f) = 0)");
    return c;
}

bool CurveSpec::good_prime(long long p) const {
    if (p < 3) return false;
    if (leading() % p == 0) return false;
    return mpz_fdiv_ui(disc.get_mpz_t(), static_cast<unsigned long>(p)) != 0;
}

namespace {

// Quadratic character table: chi[v] = 1 for nonzero squares, -1 for
// non-squares, 0 at zero. O(p) build, O(1) lookup.
struct CharTable {
    long long p;
    std::vector<int8_t> chi;

    explicit CharTable(long long p_) : p(p_), chi(static_cast<size_t>(p_), -1) {
        chi[0] = 0;
        for (long long y = 1; y < p; ++y) chi[static_cast<size_t>(y * y % p)] = 1;
    }
};

std::vector<long long> reduced_coeffs(const std::vector<long long>& f, long long p) {
    std::vector<long long> c(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        long long v = f[i] % p;
        if (v < 0) v += p;
        c[i] = v;
    }
    return c;
}

long long eval_mod(const std::vector<long long>& c, long long x, long long p) {
    long long v = 0;
    for (size_t i = c.size(); i-- > 0;) v = (v * x + c[i]) % p;
    return v;
}

void check_good(const CurveSpec& curve, long long p) {
    if (!is_prime(p) || p == 2)
        throw std::invalid_argument("count: p must be an odd prime");
    if (!curve.good_prime(p))
        throw std::domain_error("count: bad reduction at p=" + std::to_string(p));
}

long long least_nonresidue(const CharTable& tab) {
    for (long long v = 2; v < tab.p; ++v)
        if (tab.chi[static_cast<size_t>(v)] == -1) return v;
    throw std::logic_error("count: no quadratic non-residue found");
}

// Affine character sum over F_{p^2} = F_p[u]/(u^2 - nu), plus chi of the
// leading coefficient in F_{p^2}; chi_{p^2}(z) = chi_p(Norm z).
struct ExtCount {
    long long affine_sum;  // sum over z of chi_{p^2}(f(z))
    int chi_leading;
};

ExtCount ext_char_sum(const CurveSpec& curve, long long p, const CharTable& tab) {
    const long long nu = least_nonresidue(tab);
    const auto c = reduced_coeffs(curve.f, p);
    auto chi2 = [&](long long a, long long b) -> int {
        // Norm(a + b*u) = a^2 - nu*b^2; z is a square iff its norm is.
        const long long norm = (a * a % p + p - (b * b % p) * nu % p) % p;
        return tab.chi[static_cast<size_t>(norm)];
    };
    long long sum = 0;
    for (long long a = 0; a < p; ++a)
        for (long long b = 0; b < p; ++b) {
            // Horner in F_{p^2} for z = a + b*u.
            long long va = 0, vb = 0;
            for (size_t i = c.size(); i-- > 0;) {
                const long long na = ((va * a) % p + ((vb * b) % p) * nu + c[i]) % p;
                const long long nb = ((va * b) % p + (vb * a) % p) % p;
                va = na;
                vb = nb;
            }
            sum += chi2(va, vb);
        }
    long long lc = curve.leading() % p;
    if (lc < 0) lc += p;
    return {sum, chi2(lc, 0)};
}

}  // namespace

long long count_points_genus1(const CurveSpec& curve, long long p) {
    if (curve.genus != 1) throw std::invalid_argument("count_points_genus1: genus mismatch");
    check_good(curve, p);
    CharTable tab(p);
    const auto c = reduced_coeffs(curve.f, p);
    long long sum = 0;
    for (long long x = 0; x < p; ++x) sum += tab.chi[static_cast<size_t>(eval_mod(c, x, p))];
    return p + 1 + sum;
}

long long count_points_genus1_ext(const CurveSpec& curve, long long p) {
    if (curve.genus != 1) throw std::invalid_argument("count_points_genus1_ext: genus mismatch");
    check_good(curve, p);
    CharTable tab(p);
    const ExtCount ext = ext_char_sum(curve, p, tab);
    return p * p + 1 + ext.affine_sum;
}

std::pair<long long, long long> count_points_genus2(const CurveSpec& curve, long long p) {
    if (curve.genus != 2) throw std::invalid_argument("count_points_genus2: genus mismatch");
    check_good(curve, p);
    CharTable tab(p);
    const auto c = reduced_coeffs(curve.f, p);
    long long lc = curve.leading() % p;
    if (lc < 0) lc += p;

    long long affine1 = 0;
    for (long long x = 0; x < p; ++x) affine1 += 1 + tab.chi[static_cast<size_t>(eval_mod(c, x, p))];
    long long inf1;
    if (curve.degree() == 5)
        inf1 = 1;
    else
        inf1 = tab.chi[static_cast<size_t>(lc)] == 1 ? 2 : 0;
    const long long n1 = affine1 + inf1;

    const ExtCount ext = ext_char_sum(curve, p, tab);
    long long inf2;
    if (curve.degree() == 5)
        inf2 = 1;
    else
        inf2 = ext.chi_leading == 1 ? 2 : 0;
    const long long n2 = p * p + ext.affine_sum + inf2;
    return {n1, n2};
}

LPolyData l_poly_genus2(long long n1, long long n2, long long p) {
    LPolyData d;
    d.s1 = p + 1 - n1;
    d.s2 = p * p + 1 - n2;
    const long long num = d.s1 * d.s1 - d.s2;
    if (num % 2 != 0)
        throw std::runtime_error("l_poly: (s1^2 - s2) odd — corrupted counts at p=" +
                                 std::to_string(p));
    d.e2 = num / 2;
    d.t = static_cast<double>(d.s1) / std::sqrt(static_cast<double>(p));
    d.u = static_cast<double>(d.e2) / static_cast<double>(p);
    d.weil_ok = std::abs(d.t) <= 4.0 && d.u >= -2.0 && d.u <= 6.0;
    return d;
}

std::vector<long long> primes_up_to(long long n) {
    std::vector<long long> out;
    if (n < 2) return out;
    std::vector<bool> sieve(static_cast<size_t>(n) + 1, true);
    sieve[0] = sieve[1] = false;
    for (long long i = 2; i * i <= n; ++i)
        if (sieve[static_cast<size_t>(i)])
            for (long long j = i * i; j <= n; j += i) sieve[static_cast<size_t>(j)] = false;
    for (long long i = 2; i <= n; ++i)
        if (sieve[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

std::vector<TraceRecord> scan_primes(const CurveSpec& curve, long long p_max,
                                     const GaloisTwistGroup* group, int parallelism) {
    if (p_max < 3) throw std::invalid_argument("scan_primes: p_max must be >= 3");
    const bool labeled = group && group->discs.has_value();
    const auto primes = primes_up_to(p_max);
    std::vector<std::optional<TraceRecord>> slots(primes.size());

    auto handle = [&](size_t idx) {
        const long long p = primes[idx];
        if (p == 2 || !curve.good_prime(p)) return;
        TraceRecord rec;
        rec.p = p;
        if (labeled) {
            for (long long dsc : *group->discs)
                if ((dsc % p + p) % p == 0) return;  // ramified: excluded from statistics
            const int cls = frobenius_class(p, *group);
            rec.class_index = cls;
            rec.class_label = group->labels[static_cast<size_t>(cls)];
        }
        if (curve.genus == 1) {
            rec.n1 = count_points_genus1(curve, p);
            rec.s1 = p + 1 - rec.n1;
            rec.t = static_cast<double>(rec.s1) / std::sqrt(static_cast<double>(p));
            rec.weil_ok = std::abs(rec.t) <= 2.0;
        } else {
            auto [n1, n2] = count_points_genus2(curve, p);
            rec.n1 = n1;
            rec.n2 = n2;
            const LPolyData d = l_poly_genus2(n1, n2, p);
            rec.s1 = d.s1;
            rec.e2 = d.e2;
            rec.t = d.t;
            rec.u = d.u;
            rec.weil_ok = d.weil_ok;
        }
        slots[idx] = std::move(rec);
    };

    const int threads = std::max(1, parallelism);
    if (threads == 1 || primes.size() < 2) {
        for (size_t i = 0; i < primes.size(); ++i) handle(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (size_t i = static_cast<size_t>(t); i < primes.size(); i += threads) handle(i);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<TraceRecord> out;
    out.reserve(primes.size());
    for (auto& s : slots)
        if (s) out.push_back(std::move(*s));
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records,
                     const CsvHeader& header) {
    out << "# stlab " << header.version << " command=" << header.command << " seed=" << header.seed
        << " config_hash=" << header.config_hash << "\n";
    out << "p,class,N1,N2,s1,e2,t,u\n";
    for (const auto& r : records) {
        out << r.p << ',' << r.class_label << ',' << r.n1 << ',';
        if (r.n2) out << *r.n2;
        out << ',' << r.s1 << ',';
        if (r.e2) out << *r.e2;
        out << ',' << format_double(r.t) << ',';
        if (r.u) out << format_double(*r.u);
        out << '\n';
    }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
    std::vector<TraceRecord> records;
    std::string line;
    bool seen_columns = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_columns) {
            if (line != "p,class,N1,N2,s1,e2,t,u")
                throw std::invalid_argument("trace csv: unexpected column header '" + line + "'");
            seen_columns = true;
            continue;
        }
        std::vector<std::string> fields;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        fields.push_back(cur);
        if (fields.size() != 8)
            throw std::invalid_argument("trace csv: malformed row '" + line + "'");
        TraceRecord r;
        r.p = std::stoll(fields[0]);
        r.class_label = fields[1];
        r.n1 = std::stoll(fields[2]);
        if (!fields[3].empty()) r.n2 = std::stoll(fields[3]);
        r.s1 = std::stoll(fields[4]);
        if (!fields[5].empty()) r.e2 = std::stoll(fields[5]);
        r.t = std::stod(fields[6]);
        if (!fields[7].empty()) r.u = std::stod(fields[7]);
        // Genus is implied by the presence of the quadratic-extension count.
        r.weil_ok = std::abs(r.t) <= (r.n2 ? 4.0 : 2.0);
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace stlab
