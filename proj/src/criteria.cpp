#include "scatterlab/criteria.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "parallel.hpp"

namespace scatterlab::criteria {

using gf::ExpSpec;

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Guaranteed: return "guaranteed";
        case Verdict::HypothesisFails: return "hypothesis-fails";
        case Verdict::NotApplicable: return "not-applicable";
    }
    return "?";
}

std::uint64_t qmk_minus_one(const FieldCtx& F, unsigned m, unsigned K) {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < static_cast<unsigned>(m) * K; ++i) {
        if (v > (1ull << 62) / F.q())
            throw std::overflow_error("q^{mK}-1 exceeds 62 bits; instance beyond desk scale");
        v *= F.q();
    }
    return v - 1;
}

ScatteredCriterion scattered_criterion(const SequenceSpec& spec) {
    const FieldCtx& F = *spec.ctx;
    ScatteredCriterion out;
    out.gcd_IJ = std::gcd<std::uint64_t>(spec.I, spec.J);
    out.gcd_ok = out.gcd_IJ == 1;
    out.K_A = seq::invariant_K(spec);
    out.K_A_is_power = F.is_dth_power(out.K_A, ExpSpec::cyc(spec.K(), spec.m));
    out.verdict = (out.gcd_ok && !out.K_A_is_power) ? Verdict::Guaranteed
                                                    : Verdict::HypothesisFails;
    return out;
}

std::vector<std::uint64_t> exceptional_degrees(std::uint64_t q, unsigned n, std::uint64_t A,
                                               unsigned h_max) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t h = 1; h <= h_max; ++h) {
        std::uint64_t r = ExpSpec::cyc(n, h).eval_mod(q, A);
        std::uint64_t g = r == 0 ? A : std::gcd(A, r);
        if (g == 1) out.push_back(h);
    }
    return out;
}

std::vector<std::uint64_t> exceptionality_search(const SequenceSpec& spec, unsigned h_max) {
    const FieldCtx& F = *spec.ctx;
    return exceptional_degrees(F.q(), F.n(), qmk_minus_one(F, spec.m, spec.K()), h_max);
}

PiConditions pi_conditions(const SequenceSpec& spec) {
    const FieldCtx& F = *spec.ctx;
    PiConditions out;
    auto d = ExpSpec::qpow_minus1(static_cast<std::uint64_t>(spec.m) * spec.K());
    FF pi2 = seq::invariant_Pi(spec, 2);
    out.all_delta = true;
    out.exists_delta = false;
    for (unsigned delta = 1; delta + 1 <= spec.m; ++delta) {
        PiRatioEntry e;
        e.delta = delta;
        e.ratio = F.div(seq::invariant_Pi(spec, spec.wrap(delta + 2)), pi2);
        e.is_power = F.is_dth_power(e.ratio, d);
        out.all_delta = out.all_delta && !e.is_power;
        out.exists_delta = out.exists_delta || !e.is_power;
        out.entries.push_back(e);
    }
    return out;
}

std::vector<EvasiveEntry> evasive_guarantees(const SequenceSpec& spec) {
    const FieldCtx& F = *spec.ctx;
    const unsigned n = F.n(), m = spec.m, J = spec.J;
    const bool n_large = n >= 2 * (static_cast<std::uint64_t>(m) * J + J + 1);
    auto pi = pi_conditions(spec);
    std::vector<EvasiveEntry> out;
    for (unsigned r = 2; r <= m; ++r) {
        unsigned bound = (static_cast<unsigned>(r) * n) / 2 - 1;  // floor(rn/2) - 1
        if (r % 2 == 1 && n_large) out.push_back({r, bound, "odd-r"});
        if (r % 2 == 0 && n_large && pi.all_delta) out.push_back({r, bound, "even-r"});
    }
    if (pi.exists_delta)
        out.push_back({2 * m - 2, m * n - (2 * n - 2 * J), "codim2"});
    return out;
}

CuttingGuarantee cutting_guarantee(const SequenceSpec& spec) {
    const FieldCtx& F = *spec.ctx;
    CuttingGuarantee out;
    bool ok = F.n() >= 2 * spec.J + 1 && pi_conditions(spec).exists_delta;
    out.verdict = ok ? Verdict::Guaranteed : Verdict::HypothesisFails;
    out.code_minimal = ok;
    return out;
}

IndecomposabilityReport indecomposability_report(const SequenceSpec& spec) {
    const FieldCtx& F = *spec.ctx;
    IndecomposabilityReport out;
    auto pi = pi_conditions(spec);
    const bool n_large =
        F.n() >= 2 * (static_cast<std::uint64_t>(spec.m) * spec.J + spec.J + 1);
    out.direct = (n_large && pi.all_delta) ? Verdict::Guaranteed : Verdict::HypothesisFails;
    auto sc = scattered_criterion(spec);
    out.eventually = sc.gcd_ok && !sc.K_A_is_power && pi.all_delta;
    return out;
}

DivisibilityCheck divisibility_check(const SequenceSpec& spec) {
    DivisibilityCheck out;
    out.applicable = pi_conditions(spec).all_delta;
    out.consistent = !out.applicable || (spec.ctx->n() % spec.m == 0);
    return out;
}

QLowerBound q_lower_bound(const FieldCtx& F, unsigned m, unsigned I, unsigned J) {
    QLowerBound out;
    const unsigned n = F.n(), K = J - I;
    if (n % m != 0 || K % m == 0) {
        out.verdict = Verdict::NotApplicable;
        return out;
    }
    out.verdict = Verdict::Guaranteed;
    const unsigned np = n / m;
    const cpp_int N = cpp_int(F.group_order());
    const cpp_int q = F.q();

    // gcd(q^n - 1, C_{K,m}) computed through modular reduction of C_{K,m}
    std::uint64_t Nu = F.group_order();
    std::uint64_t r = ExpSpec::cyc(K, m).eval_mod(F.q(), Nu);
    std::uint64_t g1 = r == 0 ? Nu : std::gcd(Nu, r);

    cpp_rational inner = cpp_rational(N) - cpp_rational(N / g1);
    const unsigned jmax = (m - 1 + 1) / 2;  // ceil((m-1)/2)
    for (unsigned j = 1; j <= jmax; ++j) {
        cpp_int num = N * (boost::multiprecision::pow(q, std::gcd(m * np, j)) - 1);
        cpp_int den = boost::multiprecision::pow(q, m * std::gcd(np, K)) - 1;
        inner -= cpp_rational(num, den);
    }
    cpp_rational Qr = cpp_rational(boost::multiprecision::pow(N, m - 1)) * inner;
    out.exact = boost::multiprecision::denominator(Qr) == 1;
    // floor (lower bound stays valid under flooring)
    cpp_int fl = boost::multiprecision::numerator(Qr) / boost::multiprecision::denominator(Qr);
    if (Qr < 0 && cpp_rational(fl) != Qr) fl -= 1;
    out.Q = fl;

    const double c = 0.5 + (static_cast<double>(m) / 2.0) /
                               (std::pow(static_cast<double>(F.q()), m / 2.0) + 1.0);
    out.c_qm = c;
    long double t = static_cast<long double>(F.group_order()) * (1.0L - static_cast<long double>(c));
    cpp_int ceil_t = static_cast<std::uint64_t>(std::ceil(static_cast<double>(t)));
    out.floor_bound = boost::multiprecision::pow(N, m - 1) * ceil_t;
    return out;
}

InequivLowerBound inequiv_lower_bound(const FieldCtx& F, unsigned m, unsigned I, unsigned J) {
    InequivLowerBound out;
    const unsigned n = F.n(), K = J - I;
    // Gates as stated: J > I, J > n/2, n = m*n', m does not divide K.
    if (!(J > I) || !(2 * J > n) || n % m != 0 || K % m == 0) {
        out.verdict = Verdict::NotApplicable;
        return out;
    }
    out.verdict = Verdict::Guaranteed;
    out.range_conflict = 2 * J >= n;  // the equivalence theorem needs J < n/2
    const unsigned np = n / m;
    const double c = 0.5 + (static_cast<double>(m) / 2.0) /
                               (std::pow(static_cast<double>(F.q()), m / 2.0) + 1.0);
    out.value = (1.0 - c) / (static_cast<double>(m) * n * F.h()) *
                std::pow(static_cast<double>(F.q()), static_cast<double>(m * std::gcd(np, K)));
    return out;
}

CriterionReport full_report(const SequenceSpec& spec, unsigned h_max) {
    CriterionReport rep;
    rep.scattered = scattered_criterion(spec);
    rep.pi = pi_conditions(spec);
    rep.evasive = evasive_guarantees(spec);
    rep.cutting = cutting_guarantee(spec);
    rep.indecomposable = indecomposability_report(spec);
    rep.divisibility = divisibility_check(spec);
    rep.q_bound = q_lower_bound(*spec.ctx, spec.m, spec.I, spec.J);
    rep.inequiv_bound = inequiv_lower_bound(*spec.ctx, spec.m, spec.I, spec.J);
    rep.h_max = h_max;
    rep.exceptional_h = exceptionality_search(spec, h_max);
    return rep;
}

// ---------------------------------------------------------------------------
// sweeps

std::uint64_t tuple_count(const FieldCtx& F, unsigned m) {
    const std::uint64_t nz = F.group_order();
    std::uint64_t c = 1;
    for (unsigned i = 0; i < m; ++i) {
        if (c > (1ull << 62) / nz) throw std::overflow_error("tuple_count: sweep too large");
        c *= nz;
    }
    return c;
}

std::vector<FF> tuple_at(const FieldCtx& F, unsigned m, std::uint64_t idx) {
    const std::uint64_t nz = F.group_order();
    std::vector<FF> a(m);
    for (unsigned i = 0; i < m; ++i) {
        a[i] = 1 + idx % nz;
        idx /= nz;
    }
    return a;
}

void sweep_alpha_range(const FieldRef& ctx, unsigned m, unsigned I, unsigned J,
                       std::uint64_t lo, std::uint64_t hi,
                       const std::function<void(std::uint64_t, const std::vector<FF>&,
                                                const TupleFlags&)>& cb) {
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
        auto alphas = tuple_at(*ctx, m, idx);
        SequenceSpec spec(ctx, m, I, J, alphas);
        TupleFlags f;
        f.scattered_ok = scattered_criterion(spec).verdict == Verdict::Guaranteed;
        auto pi = pi_conditions(spec);
        f.all_delta = pi.all_delta;
        f.exists_delta = pi.exists_delta;
        cb(idx, alphas, f);
    }
}

SweepCounts sweep_counts(const FieldRef& ctx, unsigned m, unsigned I, unsigned J, int workers) {
    const std::uint64_t total = tuple_count(*ctx, m);
    auto chunk = [&](std::uint64_t lo, std::uint64_t hi) {
        SweepCounts c;
        sweep_alpha_range(ctx, m, I, J, lo, hi,
                          [&](std::uint64_t, const std::vector<FF>&, const TupleFlags& f) {
                              ++c.total;
                              if (f.scattered_ok) ++c.scattered_ok;
                              if (f.all_delta) ++c.all_delta;
                              if (f.exists_delta) ++c.exists_delta;
                              if (f.scattered_ok && f.all_delta) ++c.scattered_and_all_delta;
                          });
        return c;
    };
    auto merge = [](SweepCounts& a, SweepCounts&& b) {
        a.total += b.total;
        a.scattered_ok += b.scattered_ok;
        a.all_delta += b.all_delta;
        a.exists_delta += b.exists_delta;
        a.scattered_and_all_delta += b.scattered_and_all_delta;
    };
    return detail::parallel_chunks<SweepCounts>(0, total, workers, chunk, merge);
}

}  // namespace scatterlab::criteria
