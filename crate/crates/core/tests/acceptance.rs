//! Acceptance driver. Runs every criterion, prints one PASS/FAIL line for
//! each and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vvmf::decompose::monomial_basis;
use vvmf::mlde::{ingredients_via_eisenstein, second_derivative_residual};
use vvmf::rational::int;
use vvmf::valuation::nu_p_factorial;
use vvmf::*;

type Outcome = std::result::Result<String, String>;

const EXPECTED_PAIRS: [(u64, u64); 13] = [
    (10, 10),
    (10, 20),
    (10, 30),
    (10, 60),
    (12, 24),
    (15, 15),
    (15, 30),
    (15, 60),
    (20, 40),
    (20, 120),
    (30, 30),
    (30, 60),
    (60, 120),
];

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn valid_triples(max_level: u64) -> Vec<ReprParams> {
    enumerate_triples(None, max_level)
}

fn ac1_recursion_equivalence() -> Outcome {
    let triples = valid_triples(30);
    let mut checked = 0;
    for p in &triples {
        for c in Component::BOTH {
            let direct = f0_direct(p, c, 200).map_err(|e| format!("{:?} {c}: {e}", p.triple()))?;
            let sj = f0_sj_form(p, c, 200).map_err(|e| format!("{:?} {c}: {e}", p.triple()))?;
            if let Err(n) = direct.agrees_with(&sj) {
                return fail(format!("{:?} component {c} differs at n = {n}", p.triple()));
            }
            checked += 1;
        }
    }
    Ok(format!("{} triples, {checked} components, n <= 200", triples.len()))
}

fn ac2_mlde_residual() -> Outcome {
    let triples = valid_triples(30);
    let cache = EisensteinCache::new(200);
    let mut d2_checked = 0;
    for p in &triples {
        let f1 = f0_direct(p, Component::First, 200).map_err(|e| e.to_string())?;
        let f2 = f0_direct(p, Component::Second, 200).map_err(|e| e.to_string())?;
        for (c, f) in [(Component::First, &f1), (Component::Second, &f2)] {
            let r = mlde_residual(p, f, &cache).map_err(|e| e.to_string())?;
            ensure(r.order() == 200, || format!("{:?} residual order {}", p.triple(), r.order()))?;
            if let Some(n) = r.leading_index() {
                return fail(format!("{:?} component {c} residual nonzero at n = {n}", p.triple()));
            }
        }
        // the second-derivative check needs an integral weight
        if p.k0_integer().is_some() {
            let form = f0_form(p, 200).map_err(|e| e.to_string())?;
            let r = second_derivative_residual(&form, &cache).map_err(|e| e.to_string())?;
            ensure(r.order() >= 198, || format!("{:?} D^2 residual order {}", p.triple(), r.order()))?;
            for c in Component::BOTH {
                if let Some(n) = r.component(c).leading_index() {
                    return fail(format!(
                        "{:?} component {c}: D^2 F0 + kappa1 E4 F0 nonzero at n = {n}",
                        p.triple()
                    ));
                }
            }
            d2_checked += 1;
        }
    }
    ensure(d2_checked > 0, || "no triple with integral weight".into())?;
    Ok(format!(
        "{} triples residual-free to order 200, {d2_checked} with D^2 F0 + kappa1 E4 F0 = 0",
        triples.len()
    ))
}

fn ac3_valuation_formula() -> Outcome {
    let mut cases = vec![derive_params(4, 3, 7).map_err(|e| e.to_string())?];
    let mut seen_m = BTreeSet::from([7]);
    for p in valid_triples(60) {
        if p.cofactor > 1 && seen_m.insert(p.proj_level) {
            cases.push(p);
        }
    }
    ensure(cases.iter().filter(|p| p.cofactor % 7 == 0).count() >= 2, || "too few cases with 7 | Q".into())?;
    let mut tables = 0;
    for p in &cases {
        for c in Component::BOTH {
            let f = f0_direct(p, c, 150).map_err(|e| e.to_string())?;
            for prime in p.cofactor_primes() {
                let t = valuation_table(prime, &f, p, c).map_err(|e| e.to_string())?;
                ensure(t.entries.len() == 151, || format!("{:?}: short table", p.triple()))?;
                if let Some(n) = t.first_mismatch() {
                    return fail(format!("{:?} component {c} p = {prime}: mismatch at n = {n}", p.triple()));
                }
                if let Some(n) = t.first_non_decrease() {
                    return fail(format!(
                        "{:?} component {c} p = {prime}: no strict decrease at n = {n}",
                        p.triple()
                    ));
                }
                tables += 1;
            }
        }
    }
    let ms: BTreeSet<u64> = cases.iter().map(|p| p.proj_level).collect();
    let ms: Vec<String> = ms.iter().map(u64::to_string).collect();
    Ok(format!("{} triples (M in {{{}}}), {tables} tables, n <= 150", cases.len(), ms.join(",")))
}

fn ac4_pair_enumeration() -> Outcome {
    let derived: BTreeSet<(u64, u64)> = enumerate_pairs().into_iter().collect();
    let expected: BTreeSet<(u64, u64)> = EXPECTED_PAIRS.into_iter().collect();
    ensure(derived == expected, || format!("derived {derived:?}"))?;
    ensure(enumerate_pairs().len() == 13, || "duplicate pairs".into())?;
    Ok(format!("{} pairs", derived.len()))
}

fn ac5_clause_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut sampled = 0;
    let mut draws = 0u64;
    let mut modular_implication = 0;
    while sampled < 10_000 {
        draws += 1;
        let n = rng.gen_range(2..=120u64);
        let a = rng.gen_range(1..n);
        let b = rng.gen_range(0..a);
        let Ok(p) = derive_params(a, b, n) else { continue };
        if !check_constraints(&p).valid {
            continue;
        }
        sampled += 1;
        let (m, c, d) = (BigInt::from(p.proj_level), BigInt::from(p.c), BigInt::from(p.d));
        ensure(p.c * p.proj_level == n, || format!("cM != N for {:?}", p.triple()))?;
        ensure(&c * &d == BigInt::from(a as i64 - b as i64), || format!("cd != a-b for {:?}", p.triple()))?;
        ensure(d.gcd(&m).is_one(), || format!("gcd(d, M) != 1 for {:?}", p.triple()))?;
        ensure(p.cofactor * p.proj_level.gcd(&60) == p.proj_level, || {
            format!("Q gcd(M,60) != M for {:?}", p.triple())
        })?;
        if 60 % p.proj_level == 0 {
            ensure(120 % n == 0, || format!("M | 60 but N does not divide 120 for {:?}", p.triple()))?;
            modular_implication += 1;
        }
    }
    Ok(format!("{sampled} valid triples from {draws} draws, {modular_implication} with M | 60"))
}

fn ac6_ingredients() -> Outcome {
    let pool = valid_triples(120);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let cache = EisensteinCache::new(500);
    let mut names = Vec::new();
    for _ in 0..20 {
        let p = &pool[rng.gen_range(0..pool.len())];
        let closed = ingredients(p, 500);
        let expanded = ingredients_via_eisenstein(p, &cache);
        ensure(closed.order() == 500, || "short ingredients".into())?;
        if let Some(n) = (0..=500).find(|&n| closed.u[n] != expanded.u[n]) {
            return fail(format!("{:?}: u differs at n = {n}", p.triple()));
        }
        if let Some(n) = (0..=500).find(|&n| closed.v[n] != expanded.v[n]) {
            return fail(format!("{:?}: v differs at n = {n}", p.triple()));
        }
        names.push(format!("{:?}", p.triple()));
    }
    Ok(format!("20 triples, n <= 500, e.g. {}", names[..3].join(" ")))
}

fn random_form(
    rng: &mut ChaCha8Rng,
    weight: i64,
    cache: &EisensteinCache,
) -> vvmf::Result<ScalarModularForm> {
    let monomials = monomial_basis(weight)
        .into_iter()
        .map(|(e4, e6)| Monomial { e4, e6, coeff: int(rng.gen_range(-9..=9)) })
        .collect();
    ScalarModularForm::from_polynomial(weight, monomials, cache)
}

fn ac7_decomposition_round_trip() -> Outcome {
    const ORDER: usize = 100;
    let cache = EisensteinCache::new(ORDER);
    let mut generators = Vec::new();
    for (a, b, n) in [(4, 3, 7), (1, 0, 2), (3, 2, 10)] {
        let p = derive_params(a, b, n).map_err(|e| e.to_string())?;
        let f0 = f0_form(&p, ORDER).map_err(|e| e.to_string())?;
        let df0 = modular_derivative(&f0, &cache).map_err(|e| e.to_string())?;
        generators.push((f0, df0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut cases = 0;
    while cases < 50 {
        let w = 2 * rng.gen_range(0..=7i64);
        let alpha =
            if w <= 12 { random_form(&mut rng, w, &cache) } else { Ok(ScalarModularForm::zero(w, ORDER)) }
                .map_err(|e| e.to_string())?;
        let beta = random_form(&mut rng, w - 2, &cache).map_err(|e| e.to_string())?;
        if alpha.is_zero() && beta.is_zero() {
            continue;
        }
        let (f0, df0) = &generators[cases % generators.len()];
        let g = reconstruct(&alpha, &beta, f0, df0).map_err(|e| e.to_string())?;
        let back = decompose(&g, f0, df0)
            .and_then(|d| d.with_presentations(&cache))
            .map_err(|e| format!("case {cases} (weight {w}): {e}"))?;
        ensure(back.alpha == alpha && back.beta == beta, || {
            format!("case {cases} (weight {w}): decompose(reconstruct(alpha, beta)) != (alpha, beta)")
        })?;
        let again = reconstruct(&back.alpha, &back.beta, f0, df0).map_err(|e| e.to_string())?;
        ensure(again == g, || format!("case {cases}: reconstruct(decompose(G)) != G"))?;
        cases += 1;
    }
    Ok(format!("{cases} pairs over 3 generators, order {ORDER}"))
}

fn ac8_growth_probe() -> Outcome {
    let p = derive_params(4, 3, 7).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for (name, alpha) in [("E4", eisenstein4(7)), ("E6", eisenstein6(7))] {
        let probe = probe_alpha_f0_bound(&alpha, &p, 7, 1).map_err(|e| e.to_string())?;
        ensure(probe.rhs == -8, || format!("{name}: rhs {}", probe.rhs))?;
        ensure(probe.holds, || format!("{name}: nu_7(c_7) = {} > {}", probe.lhs, probe.rhs))?;
        parts.push(format!("{name}: nu_7(c_7) = {} <= {}", probe.lhs, probe.rhs));
    }
    Ok(parts.join(", "))
}

fn digit_sum(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (-100_000i64..=100_000, 1i64..=100_000)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn ac9_valuation_axioms() -> Outcome {
    const CASES: u32 = 2000;
    let primes = [2u64, 3, 5, 7, 11, 13];
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner
        .run(&(nonzero_rational(), nonzero_rational(), 0..primes.len()), |(x, y, i)| {
            let p = primes[i];
            let (vx, vy) = (nu_p(p, &x).unwrap(), nu_p(p, &y).unwrap());
            prop_assert_eq!(nu_p(p, &(&x * &y)).unwrap(), vx + vy);
            let sum = &x + &y;
            if !sum.is_zero() {
                prop_assert!(nu_p(p, &sum).unwrap() >= vx.min(vy));
            }
            Ok(())
        })
        .map_err(|e| format!("property failed: {e}"))?;
    for p in [2u64, 3, 5, 7, 11] {
        for n in 0..=10_000u64 {
            let lhs = nu_p_factorial(p, n) * (p - 1);
            ensure(lhs == n - digit_sum(n, p), || format!("Legendre identity fails at p = {p}, n = {n}"))?;
        }
    }
    Ok(format!("{CASES} random cases, Legendre identity for n <= 10000"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("recursion oracle equivalence", ac1_recursion_equivalence),
        ("MLDE residual", ac2_mlde_residual),
        ("denominator valuation formula", ac3_valuation_formula),
        ("pair enumeration", ac4_pair_enumeration),
        ("constraint clause consistency", ac5_clause_consistency),
        ("Eisenstein ingredient cross-check", ac6_ingredients),
        ("decomposition round trip", ac7_decomposition_round_trip),
        ("growth probe", ac8_growth_probe),
        ("valuation axioms", ac9_valuation_axioms),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| fail("panicked"));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
