// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stlab/endo_galois.hpp"

namespace stlab {

// Hyperelliptic model y^2 = f(x) over Q, genus 1 (deg 3) or 2 (deg 5 or 6).
struct CurveSpec {
    int genus = 1;
    std::vector<long long> f;  // ascending-degree coefficients
    mpz_class disc;            // discriminant of f

    int degree() const { return static_cast<int>(f.size()) - 1; }
    long long leading() const { return f.back(); }

    // Validates degree/genus compatibility and nonsingularity (disc != 0).
    static CurveSpec make(int genus, std::vector<long long> coeffs);

    bool good_prime(long long p) const;
};

struct TraceRecord {
    long long p = 0;
    std::optional<int> class_index;
    std::string class_label;  // empty when unlabeled
    long long n1 = 0;
    std::optional<long long> n2;  // genus 2 only
    long long s1 = 0;
    std::optional<long long> e2;  // genus 2 only
    double t = 0.0;
    std::optional<double> u;  // genus 2 only
    bool weil_ok = true;
};

// Discriminant of an integer polynomial (ascending coefficients).
mpz_class poly_discriminant(const std::vector<long long>& coeffs);

// #E(F_p) including the point at infinity, via the quadratic character sum.
long long count_points_genus1(const CurveSpec& curve, long long p);

// Genus-1 count over F_{p^2} (consistency oracle: s2 = s1^2 - 2p).
long long count_points_genus1_ext(const CurveSpec& curve, long long p);

// (N1, N2) for a genus-2 curve: counts over F_p and F_{p^2} on the smooth
// model (deg 5: one point at infinity; deg 6: two when the leading
// coefficient is a square in the field, none otherwise).
std::pair<long long, long long> count_points_genus2(const CurveSpec& curve, long long p);

struct LPolyData {
    long long s1 = 0;
    long long s2 = 0;
    long long e2 = 0;
    double t = 0.0;
    double u = 0.0;
    bool weil_ok = true;
};

// Power sums -> elementary symmetric data of the Frobenius eigenvalues:
// s1 = p+1-N1, s2 = p^2+1-N2, e2 = (s1^2-s2)/2, t = s1/sqrt(p), u = e2/p.
// Weil-range violations are flagged on the result, never clamped.
LPolyData l_poly_genus2(long long n1, long long n2, long long p);

// Records for all good odd primes <= p_max, ascending. When the group has a
// field descriptor, class labels are attached and ramified primes skipped.
// Output is a pure function of (curve, p_max, group).
std::vector<TraceRecord> scan_primes(const CurveSpec& curve, long long p_max,
                                     const GaloisTwistGroup* group, int parallelism = 1);

struct CsvHeader {
    std::string version;
    std::string command;
    uint64_t seed = 0;
    std::string config_hash;  // hex
};

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records,
                     const CsvHeader& header);
std::vector<TraceRecord> read_trace_csv(std::istream& in);

std::vector<long long> primes_up_to(long long n);

}  // namespace stlab
