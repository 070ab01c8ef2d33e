//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use binquad::densities::{
    census_formula, extension_census, mass_identity_check, orbital_volume_bruteforce, orbital_volume_closed,
    aggregate_volume_check,
};
use binquad::global::{
    analytic_crosscheck, class_number_imaginary, class_number_real, fundamental_discriminants, regulator_real,
    ClassDataCache, ConditionSet, Sign,
};
use binquad::mean_value::{convergence_report, empirical_sum, euler_product, predicted_constant};
use binquad::orbits::{
    congruence_solution_count, dx_subset_orbit_check, nx_order, ramified_representatives,
    solution_set_characterization, stabilizer_order, StandardRep,
};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn q_pow(p: u64, e: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(p).pow(e))
}

fn reps(primes: &[u64]) -> Vec<StandardRep> {
    primes
        .iter()
        .flat_map(|&p| ramified_representatives(p).expect("prime"))
        .collect()
}

fn orbital_volumes() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for rep in reps(&[2, 3, 5]) {
        let p = rep.p as i64;
        let one = BigRational::one();
        let expected = q(1, 2) / q_pow(rep.p, rep.delta) * (&one - q(1, p)) * (one - q(1, p * p));
        let bfs = orbital_volume_bruteforce(&rep, rep.n).expect("within capacity");
        let closed = orbital_volume_closed(&rep).expect("ramified");
        count += 1;
        if bfs != expected || closed != expected {
            failures.push(format!("{}: {bfs} vs {expected}", rep.label()));
        }
    }
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs(60);
    Outcome::new(
        failures.is_empty() && in_time,
        format!("{count} representatives exact, {:.1}s {failures:?}", elapsed.as_secs_f64()),
    )
}

fn stabilizers() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for rep in reps(&[2, 3, 5]) {
        let ring = rep.working_ring();
        let (p, n) = (rep.p as u128, rep.n);
        let nx_expected = p.pow(2 * n - 1) * (p - 1);
        let stab_expected = 2 * p.pow(rep.delta) * nx_expected;
        let stab = stabilizer_order(&rep.form, &ring).expect("within capacity");
        let nx = nx_order(&rep.form, &ring).expect("monic") as u128;
        count += 1;
        if stab != stab_expected || nx != nx_expected {
            failures.push(format!("{}: stab {stab}/{stab_expected}, nx {nx}/{nx_expected}", rep.label()));
        }
    }
    Outcome::new(failures.is_empty(), format!("{count} representatives {failures:?}"))
}

fn congruences() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for rep in reps(&[2, 3, 5]) {
        let ring = rep.working_ring();
        let expected = 2 * rep.p.pow(rep.delta);
        let got = congruence_solution_count(&rep.form, &ring).expect("monic");
        let v = solution_set_characterization(&rep).expect("ramified");
        count += 1;
        if got != expected || !v.equal || !v.branches_disjoint {
            failures.push(format!("{}: {got}/{expected} {v:?}", rep.label()));
        }
    }
    Outcome::new(failures.is_empty(), format!("{count} representatives {failures:?}"))
}

fn residue_discs() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for rep in reps(&[2, 3]) {
        let v = dx_subset_orbit_check(&rep.form, rep.p, rep.n, rep.n + 1).expect("within capacity");
        count += 1;
        if !v.pass {
            failures.push(format!("{}: {}/{}", rep.label(), v.in_orbit, v.lifts));
        }
    }
    Outcome::new(failures.is_empty(), format!("{count} representatives at level n+1 {failures:?}"))
}

fn aggregation() -> Outcome {
    let mut failures = Vec::new();
    for p in [2u64, 3, 5] {
        let m = u32::from(p == 2);
        for s in aggregate_volume_check(p).expect("prime") {
            if !s.pass() {
                failures.push(format!("p={p} delta={}: {} vs {}", s.delta, s.sum, s.formula));
            }
        }
        for (delta, count) in extension_census(p).expect("prime") {
            if census_formula(p, m, delta) != Some(count) {
                failures.push(format!("p={p} delta={delta}: {count}"));
            }
        }
    }
    let c2 = extension_census(2).expect("prime");
    let total = 1 + c2.values().sum::<u64>();
    let dyadic = total == 7 && c2.get(&2) == Some(&2) && c2.get(&3) == Some(&4);
    if !dyadic {
        failures.push(format!("Q_2 census {c2:?}"));
    }
    Outcome::new(
        failures.is_empty(),
        format!("Q_2: {total} extensions, delta=2: {:?}, delta=3: {:?} {failures:?}", c2.get(&2), c2.get(&3)),
    )
}

fn mass() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for q in [2u64, 3, 5, 7] {
        let m = mass_identity_check(q).expect("prime");
        pass &= m.pass();
        parts.push(format!("q={q}: {}", m.sum));
    }
    Outcome::new(pass, parts.join(", "))
}

fn within(a: f64, target: f64, tol: f64) -> bool {
    (a / target - 1.0).abs() <= tol
}

fn set(s: &str) -> ConditionSet {
    s.parse().expect("valid conditions")
}

fn dyadic_refinement(cache: &mut ClassDataCache) -> Outcome {
    let start = Instant::now();
    let x = 1_000_000;
    let mut sum = |c: &str| empirical_sum(cache, x, &set(c)).expect("within capacity");
    let c1 = sum("inf=C,2=ram:-1");
    let c5 = sum("inf=C,2=ram:-5");
    let delta3: Vec<f64> = ["2", "-2", "10", "-10"]
        .iter()
        .map(|l| sum(&format!("inf=C,2=ram:{l}")))
        .collect();
    let split = sum("inf=C,2=split");
    let inert = sum("inf=C,2=unram");
    let mean2 = (c1 + c5) / 2.0;
    let mean3 = delta3.iter().sum::<f64>() / delta3.len() as f64;
    let equal = within(c1, c5, 0.02);
    let r23 = mean2 / mean3;
    let rsi = split / inert;
    let elapsed = start.elapsed();
    let pass = equal && within(r23, 2.0, 0.02) && within(rsi, 3.0, 0.02) && elapsed <= Duration::from_secs(600);
    Outcome::new(
        pass,
        format!(
            "ram:-1/ram:-5 = {:.5}, delta2:delta3 = {r23:.5}, split:inert = {rsi:.5}, {:.1}s",
            c1 / c5,
            elapsed.as_secs_f64()
        ),
    )
}

fn absolute_constant(cache: &mut ClassDataCache) -> Outcome {
    let im = convergence_report(cache, &[10_000, 100_000, 1_000_000], &set("inf=C")).expect("sweep");
    let re = convergence_report(cache, &[10_000, 100_000], &set("inf=RxR")).expect("sweep");
    let last = |r: &binquad::mean_value::ConvergenceReport| r.checkpoints.last().expect("nonempty").ratio;
    let first = |r: &binquad::mean_value::ConvergenceReport| r.checkpoints[0].ratio;
    let toward = |r: &binquad::mean_value::ConvergenceReport| (last(r) - 1.0).abs() < (first(r) - 1.0).abs();
    let pass = within(last(&im), 1.0, 0.05) && within(last(&re), 1.0, 0.05) && toward(&im) && toward(&re);
    let fmt = |r: &binquad::mean_value::ConvergenceReport| {
        r.checkpoints
            .iter()
            .map(|c| format!("{:.5}", c.ratio))
            .collect::<Vec<_>>()
            .join(" -> ")
    };
    Outcome::new(pass, format!("imaginary {} ; real {}", fmt(&im), fmt(&re)))
}

fn oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut sampled = 0;
    for sign in [Sign::Negative, Sign::Positive] {
        let ds = fundamental_discriminants(10_000, sign);
        for &d in ds.choose_multiple(&mut rng, 50) {
            let exact = if d < 0 {
                class_number_imaginary(d) as f64
            } else {
                class_number_real(d) as f64 * regulator_real(d)
            };
            worst = worst.max((analytic_crosscheck(d) - exact).abs() / exact);
            sampled += 1;
        }
    }
    let e5 = euler_product(&[], 100_000).expect("cutoff").value;
    let e6 = euler_product(&[], 1_000_000).expect("cutoff").value;
    let stable = (e5 - e6).abs() <= 1e-5;
    Outcome::new(
        worst <= 1e-6 && stable && sampled == 100,
        format!(
            "{sampled} discriminants, worst relative gap {worst:.2e}; euler product {e5:.8} vs {e6:.8}"
        ),
    )
}

type Criterion = Box<dyn FnOnce(&mut ClassDataCache) -> Outcome>;

fn main() -> ExitCode {
    let mut cache = ClassDataCache::in_memory();
    let predicted = predicted_constant(&set("inf=C")).expect("valid").total;
    println!("predicted constant (imaginary): {predicted:.6}");
    let criteria: Vec<(&str, Criterion)> = vec![
        ("orbital volumes of ramified representatives", Box::new(|_| orbital_volumes())),
        ("stabilizer and N_x orders", Box::new(|_| stabilizers())),
        ("congruence solution sets", Box::new(|_| congruences())),
        ("residue discs inside orbits", Box::new(|_| residue_discs())),
        ("aggregate volumes and extension census", Box::new(|_| aggregation())),
        ("mass identity", Box::new(|_| mass())),
        ("dyadic conditioned constants", Box::new(dyadic_refinement)),
        ("absolute constant and checkpoint trend", Box::new(absolute_constant)),
        ("analytic oracle and Euler product stability", Box::new(|_| oracles())),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let out = run(&mut cache);
        all &= out.pass;
        let mark = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {mark} {name}: {}", i + 1, out.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
