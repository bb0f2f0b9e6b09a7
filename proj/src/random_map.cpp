#include "qpmaps/random_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "qpmaps/errors.hpp"
#include "qpmaps/rng.hpp"
#include "qpmaps/scalar.hpp"

namespace qpmaps {

namespace {

constexpr int kMaxRedraws = 64;

// Uniform rational p/q with q <= max_den inside [lo, hi].
Scalar draw_rational(Rng& rng, double lo, double hi, long max_den = 8) {
    if (!(lo <= hi)) throw InvalidParameter("entry range is empty");
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        long den = static_cast<long>(rng.uniform_int(1, max_den));
        long num_lo = static_cast<long>(std::ceil(lo * static_cast<double>(den)));
        long num_hi = static_cast<long>(std::floor(hi * static_cast<double>(den)));
        if (num_lo > num_hi) continue;
        long num = static_cast<long>(
            rng.uniform_int(num_lo, num_hi));
        return Scalar::rational(num, den);
    }
    // Fall back to the finest grid; if even that is empty the range holds
    // no representable rational.
    long num_lo = static_cast<long>(std::ceil(lo * static_cast<double>(max_den)));
    long num_hi = static_cast<long>(std::floor(hi * static_cast<double>(max_den)));
    if (num_lo > num_hi)
        throw InvalidParameter("entry range contains no rational with denominator <= 8");
    return Scalar::rational(static_cast<long>(rng.uniform_int(num_lo, num_hi)), max_den);
}

Scalar draw_nonzero(Rng& rng, double lo, double hi, long max_den = 8) {
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        Scalar s = draw_rational(rng, lo, hi, max_den);
        if (!struct_zero(s)) return s;
    }
    if (hi >= 1.0 / static_cast<double>(max_den))
        return Scalar::rational(1, max_den);
    if (lo <= -1.0 / static_cast<double>(max_den))
        return Scalar::rational(-1, max_den);
    throw InvalidParameter("entry range contains no nonzero rational with denominator <= 8");
}

Scalar draw_positive(Rng& rng, double hi, long max_den = 8) {
    double lo = 1.0 / static_cast<double>(max_den);
    if (hi < lo) throw InvalidParameter("entry range upper bound too small for a positive draw");
    return draw_rational(rng, lo, hi, max_den);
}

bool rows_equal(const Matrix<Scalar>& b, std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < b.cols(); ++k)
        if (!struct_equal(b(i, k), b(j, k))) return false;
    return true;
}

void fix_zero_columns(Rng& rng, Matrix<Scalar>& a, double lo, double hi) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < a.rows(); ++i)
            if (!struct_zero(a(i, j))) { zero = false; break; }
        if (zero) {
            std::size_t i = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<long>(a.rows()) - 1));
            a(i, j) = draw_nonzero(rng, lo, hi);
        }
    }
}

QPMap make_unconstrained(Rng& rng, std::size_t n, std::size_t m, double lo, double hi) {
    QPMap map;
    map.n = n;
    map.m = m;
    map.lambda.reserve(n);
    for (std::size_t i = 0; i < n; ++i) map.lambda.push_back(draw_rational(rng, lo, hi));
    map.A = Matrix<Scalar>(n, m, Scalar(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) map.A(i, j) = draw_rational(rng, lo, hi);
    fix_zero_columns(rng, map.A, lo, hi);
    map.B = Matrix<Scalar>(m, n, Scalar(0));
    for (std::size_t j = 0; j < m; ++j) {
        for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
            bool zero = true;
            for (std::size_t k = 0; k < n; ++k) {
                map.B(j, k) = draw_rational(rng, lo, hi);
                if (!struct_zero(map.B(j, k))) zero = false;
            }
            if (zero) map.B(j, static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(n) - 1))) =
                draw_nonzero(rng, lo, hi);
            bool duplicate = false;
            for (std::size_t p = 0; p < j; ++p)
                if (rows_equal(map.B, j, p)) { duplicate = true; break; }
            if (!duplicate) break;
            if (attempt + 1 == kMaxRedraws)
                throw InvalidParameter("could not draw distinct exponent rows in the given range");
        }
    }
    return map;
}

QPMap make_conservative_2d(Rng& rng, std::size_t m, double lo, double hi) {
    QPMap map;
    map.n = 2;
    map.m = m;
    Scalar r = draw_rational(rng, lo, hi);
    map.lambda = {r, -r};
    map.A = Matrix<Scalar>(2, m, Scalar(0));
    map.B = Matrix<Scalar>(m, 2, Scalar(0));
    std::vector<Scalar> used;
    for (std::size_t j = 0; j < m; ++j) {
        Scalar a = draw_nonzero(rng, lo, hi);
        map.A(0, j) = a;
        map.A(1, j) = -a;
        Scalar b = draw_nonzero(rng, lo, hi);
        for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
            bool clash = false;
            for (const Scalar& u : used)
                if (struct_equal(u, b)) { clash = true; break; }
            if (!clash) break;
            if (attempt + 1 == kMaxRedraws)
                throw InvalidParameter("could not draw distinct exponent rows in the given range");
            b = draw_nonzero(rng, lo, hi);
        }
        used.push_back(b);
        map.B(j, 0) = b;
        map.B(j, 1) = b;
    }
    return map;
}

QPMap make_lv(Rng& rng, std::size_t n, double lo, double hi) {
    QPMap map;
    map.n = n;
    map.m = n;
    map.lambda.reserve(n);
    for (std::size_t i = 0; i < n; ++i) map.lambda.push_back(draw_rational(rng, lo, hi));
    map.A = Matrix<Scalar>(n, n, Scalar(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) map.A(i, j) = draw_rational(rng, lo, hi);
    fix_zero_columns(rng, map.A, lo, hi);
    map.B = Matrix<Scalar>::identity(n);
    return map;
}

QPMap make_symplectic(Rng& rng, std::size_t s, std::size_t m, double hi) {
    const std::size_t n = 2 * s;
    QPMap map;
    map.n = n;
    map.m = m;
    map.lambda.assign(n, Scalar(0));
    double mag = std::min(hi, 0.5);
    for (std::size_t i = 0; i < s; ++i) {
        Scalar l = draw_rational(rng, -mag, mag);
        map.lambda[i] = l;
        map.lambda[s + i] = -l;
    }
    map.A = Matrix<Scalar>(n, m, Scalar(0));
    map.B = Matrix<Scalar>(m, n, Scalar(0));
    // Each quasimonomial is owned by one conjugate pair (i, s+i): its A
    // column is supported on that pair with opposite signs and its
    // exponent row touches only that pair, with equal entries. All four
    // pairing conditions then hold exactly.
    std::vector<std::vector<Scalar>> used(s);
    for (std::size_t p = 0; p < m; ++p) {
        std::size_t owner = p % s;
        Scalar a = draw_nonzero(rng, -mag, mag);
        map.A(owner, p) = a;
        map.A(s + owner, p) = -a;
        Scalar b = draw_positive(rng, hi);
        for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
            bool clash = false;
            for (const Scalar& u : used[owner])
                if (struct_equal(u, b)) { clash = true; break; }
            if (!clash) break;
            if (attempt + 1 == kMaxRedraws)
                throw InvalidParameter("could not draw distinct exponent rows in the given range");
            b = draw_positive(rng, hi);
        }
        used[owner].push_back(b);
        map.B(p, owner) = b;
        map.B(p, s + owner) = b;
    }
    return map;
}

// Tame family satisfying both trace conditions exactly. All leaf rows are
// multiples of the all-ones row, so their quasimonomials are constant on
// the invariant leaves; the optional generic row gets a mean-centered,
// negatively aligned A column, which makes its own log-monomial follow a
// damped scalar recurrence. Orbits from moderate states stay bounded in
// log coordinates for hundreds of steps.
QPMap make_trace_conservative(Rng& rng, std::size_t n, std::size_t m) {
    QPMap map;
    map.n = n;
    map.m = m;

    auto small = [&rng]() { return draw_rational(rng, -1.0 / 16.0, 1.0 / 16.0, 64); };

    map.lambda.assign(n, Scalar(0));
    Scalar lsum(0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        map.lambda[i] = small();
        lsum += map.lambda[i];
    }
    map.lambda[n - 1] = -lsum;

    map.A = Matrix<Scalar>(n, m, Scalar(0));
    map.B = Matrix<Scalar>(m, n, Scalar(0));

    const std::size_t generic = (m >= 2 && n >= 2) ? 1 : 0;
    const std::size_t leafs = m - generic;
    long offset = static_cast<long>(rng.uniform_int(0, 3));

    for (std::size_t p = 0; p < leafs; ++p) {
        Scalar b = Scalar::rational(static_cast<long>(p) + 1 + offset, 8);
        for (std::size_t k = 0; k < n; ++k) map.B(p, k) = b;
        for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
            Scalar csum(0);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                map.A(i, p) = small();
                csum += map.A(i, p);
            }
            map.A(n - 1, p) = -csum;
            bool zero = true;
            for (std::size_t i = 0; i < n; ++i)
                if (!struct_zero(map.A(i, p))) { zero = false; break; }
            if (!zero) break;
            if (attempt + 1 == kMaxRedraws) {
                map.A(0, p) = Scalar::rational(1, 64);
                map.A(n - 1, p) = Scalar::rational(-1, 64);
            }
        }
    }

    if (generic) {
        const std::size_t p = m - 1;
        // Two distinct support positions; distinct values when n = 2 so
        // the row is never proportional to the all-ones row.
        std::size_t i1 = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(n) - 1));
        std::size_t i2 = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(n) - 2));
        if (i2 >= i1) ++i2;
        const long nums[3] = {1, 2, 4};
        long v1 = nums[rng.uniform_int(0, 2)];
        long v2 = nums[rng.uniform_int(0, 2)];
        if (n == 2 && v1 == v2) v2 = (v1 == 1) ? 2 : 1;
        map.B(p, i1) = Scalar::rational(v1, 4);
        map.B(p, i2) = Scalar::rational(v2, 4);
        Scalar eps = rng.coin() ? Scalar::rational(1, 32) : Scalar::rational(1, 16);
        Scalar rsum(0);
        for (std::size_t k = 0; k < n; ++k) rsum += map.B(p, k);
        Scalar mean = rsum / Scalar(static_cast<long>(n));
        for (std::size_t i = 0; i < n; ++i)
            map.A(i, p) = -eps * (map.B(p, i) - mean);
    }

    return map;
}

QPMap make_example1_instance(Rng& rng, double lo, double hi) {
    Scalar l1 = draw_rational(rng, lo, hi);
    Scalar l2 = draw_rational(rng, lo, hi);
    Scalar a13 = draw_nonzero(rng, lo, hi);
    return make_example1(l1, l2, a13);
}

QPMap make_example2_instance(Rng& rng, double lo, double hi) {
    Scalar l1 = draw_rational(rng, lo, hi);
    Scalar l2 = draw_rational(rng, lo, hi);
    Scalar a13 = draw_nonzero(rng, lo, hi);
    Scalar a14 = draw_rational(rng, lo, hi);
    Scalar a24 = struct_zero(a14) ? draw_nonzero(rng, lo, hi) : draw_rational(rng, lo, hi);
    return make_example2(l1, l2, a13, a14, a24);
}

} // namespace

QPMap random_map(std::uint64_t seed, std::size_t n, std::size_t m,
                 std::pair<double, double> entry_range, Profile profile) {
    const double lo = entry_range.first;
    const double hi = entry_range.second;
    if (!(lo < hi)) throw InvalidParameter("entry range must satisfy lo < hi");
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(profile.kind)));

    QPMap map;
    switch (profile.kind) {
        case ProfileKind::Unconstrained: {
            if (n == 0) n = 3;
            if (m == 0) m = 2;
            map = make_unconstrained(rng, n, m, lo, hi);
            break;
        }
        case ProfileKind::Conservative2D: {
            if (n == 0) n = 2;
            if (n != 2) throw InvalidParameter("conservative-2d profile requires n = 2");
            if (m == 0) m = 2;
            map = make_conservative_2d(rng, m, lo, hi);
            break;
        }
        case ProfileKind::Example1Family: {
            if (n != 0 && n != 3) throw InvalidParameter("example1 profile requires n = 3");
            if (m != 0 && m != 1) throw InvalidParameter("example1 profile requires m = 1");
            map = make_example1_instance(rng, lo, hi);
            break;
        }
        case ProfileKind::Example2Family: {
            if (n != 0 && n != 3) throw InvalidParameter("example2 profile requires n = 3");
            if (m != 0 && m != 2) throw InvalidParameter("example2 profile requires m = 2");
            map = make_example2_instance(rng, lo, hi);
            break;
        }
        case ProfileKind::LotkaVolterra: {
            if (n == 0) n = (m != 0) ? m : 2;
            if (m != 0 && m != n)
                throw InvalidParameter("lotka-volterra profile requires m = n");
            map = make_lv(rng, n, lo, hi);
            break;
        }
        case ProfileKind::Symplectic: {
            std::size_t s = profile.s;
            if (s == 0) {
                if (n == 0) n = 2;
                if (n % 2 != 0) throw InvalidParameter("symplectic profile requires even n");
                s = n / 2;
            } else if (n != 0 && n != 2 * s) {
                throw InvalidParameter("symplectic profile requires n = 2s");
            }
            if (m == 0) m = s + 1;
            if (hi <= 0.0)
                throw InvalidParameter("symplectic profile needs a positive entry range");
            map = make_symplectic(rng, s, m, hi);
            break;
        }
        case ProfileKind::TraceConservative: {
            if (n == 0) n = 3;
            if (n < 2) throw InvalidParameter("trace-conservative profile requires n >= 2");
            if (m == 0) m = 2;
            map = make_trace_conservative(rng, n, m);
            break;
        }
    }

    validate(map);
    return map;
}

Profile parse_profile(const std::string& name) {
    if (name == "unconstrained") return Profile::unconstrained();
    if (name == "conservative-2d" || name == "conservative2d")
        return Profile::conservative_2d();
    if (name == "example1") return Profile::example1();
    if (name == "example2") return Profile::example2();
    if (name == "lv" || name == "lotka-volterra") return Profile::lotka_volterra();
    if (name == "symplectic") return Profile::symplectic(0);
    if (name == "trace-conservative" || name == "trace") return Profile::trace_conservative();
    throw InvalidParameter("unknown profile: " + name);
}

std::string profile_name(const Profile& p) {
    switch (p.kind) {
        case ProfileKind::Unconstrained: return "unconstrained";
        case ProfileKind::Conservative2D: return "conservative-2d";
        case ProfileKind::Example1Family: return "example1";
        case ProfileKind::Example2Family: return "example2";
        case ProfileKind::LotkaVolterra: return "lv";
        case ProfileKind::Symplectic: return "symplectic";
        case ProfileKind::TraceConservative: return "trace-conservative";
    }
    return "unconstrained";
}

} // namespace qpmaps
