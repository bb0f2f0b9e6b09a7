#pragma once

// Seeded generation of map families for tests and fixtures. Every profile
// builds its structural guarantees constructively (no rejection sampling
// of the advertised conditions) and draws entries as exact rationals, so
// downstream structural checks run exactly. Deterministic in the seed on
// every platform.

#include <cstdint>
#include <string>
#include <utility>

#include "qpmaps/qp_map.hpp"

namespace qpmaps {

enum class ProfileKind {
    // Arbitrary valid map; no conditions beyond well-formedness.
    Unconstrained,
    // n = 2 satisfying the exact conservative characterization.
    Conservative2D,
    // Instances of the built-in 3-d example families.
    Example1Family,
    Example2Family,
    // Lotka-Volterra: B = identity, m = n.
    LotkaVolterra,
    // n = 2s satisfying the symplectic pairing conditions (a)-(d).
    Symplectic,
    // Any n, satisfying the trace conditions (lambda sums to zero, A
    // columns sum to zero) with deliberately tame magnitudes: most
    // exponent rows are multiples of the all-ones row, so their
    // quasimonomials are frozen on the leaves prod x_i = const, plus at
    // most one self-damped generic row. Orbits stay within the overflow
    // guard for hundreds of steps, which the reduction tests rely on.
    TraceConservative,
};

struct Profile {
    ProfileKind kind = ProfileKind::Unconstrained;
    std::size_t s = 0; // symplectic pair count (0 = derive from n)

    static Profile unconstrained() { return {ProfileKind::Unconstrained, 0}; }
    static Profile conservative_2d() { return {ProfileKind::Conservative2D, 0}; }
    static Profile example1() { return {ProfileKind::Example1Family, 0}; }
    static Profile example2() { return {ProfileKind::Example2Family, 0}; }
    static Profile lotka_volterra() { return {ProfileKind::LotkaVolterra, 0}; }
    static Profile symplectic(std::size_t s) { return {ProfileKind::Symplectic, s}; }
    static Profile trace_conservative() { return {ProfileKind::TraceConservative, 0}; }
};

// n = 0 or m = 0 pick profile defaults (for LotkaVolterra m is tied to n;
// for Example1Family/Example2Family both are fixed). entry_range bounds
// the rational entries; it must contain a nonzero rational with
// denominator at most 8. Throws InvalidParameter for impossible requests
// (e.g. Conservative2D with n = 3, Symplectic with odd n).
QPMap random_map(std::uint64_t seed, std::size_t n, std::size_t m,
                 std::pair<double, double> entry_range, Profile profile);

// Profile tags accepted by the CLI (see parse): unconstrained,
// conservative-2d, example1, example2, lv, symplectic, trace-conservative.
Profile parse_profile(const std::string& name);
std::string profile_name(const Profile& p);

} // namespace qpmaps
