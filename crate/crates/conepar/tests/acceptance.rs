//! Acceptance criteria 1-12. Prints one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use conepar::exactnum::{factorial, harmonic, rat, rat_int, QuadExtNumber, Rational};
use conepar::kernelasm::{fundamental_solution_series, kernel_eval_table, kernel_table, sum_series, FsTerm};
use conepar::reference::{difference_factor_r, green_kernel_n3, laplace_fs, parametrix_kernel_n3, standard_fs};
use conepar::symbolcalc::{asymptotic_symbol, default_contour, defining_identity_check, ConeOperator};
use conepar::verify::{annihilation_check, distributional_pairing, residue_agreement, RadialTestFunction};
use conepar::words::{cardinality, cardinality_binomial, enumerate_words, word_symbol};

/// Criteria that cannot be met as stated; see README.
const KNOWN_FAILURES: &[u32] = &[11];

struct Outcome {
    id: u32,
    passed: bool,
    detail: String,
}

fn report(id: u32, passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        id,
        passed,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Exact value of the split `(plain, log)` coefficients of one order.
fn split(terms: &[FsTerm]) -> (QuadExtNumber, QuadExtNumber) {
    let mut plain = QuadExtNumber::zero();
    let mut log = QuadExtNumber::zero();
    for t in terms {
        let slot = if t.log_r { &mut log } else { &mut plain };
        *slot = slot.checked_add(&t.coefficient).unwrap();
    }
    (plain, log)
}

fn q(x: Rational) -> QuadExtNumber {
    QuadExtNumber::rational(x)
}

fn fi(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

fn criterion_1() -> Outcome {
    let tol = 1e-12;
    let start = Instant::now();
    let op = ConeOperator::shifted_laplacian(3, rat_int(1), 40).unwrap();
    let series = fundamental_solution_series(&op, 40).unwrap();
    let mut worst: f64 = 0.0;
    let mut bounds = Vec::new();
    for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
        // the majorant is loose at r = 5 (about 4), so the bound is reported, not enforced
        let s = sum_series(&series, r, 40, f64::INFINITY).unwrap();
        worst = worst.max(rel(s.value, -r.cosh() / (4.0 * PI * r)));
        bounds.push(format!("{r}:{:.1e}", s.tail_bound));
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        worst <= tol && secs < 10.0,
        format!(
            "n=3 kappa=1 order 40 vs -cosh(r)/(4 pi r): max rel err {worst:.2e} (tol {tol:.0e}), {secs:.2}s, tail bounds [{}]",
            bounds.join(" ")
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    for k2 in [rat_int(1), rat(7, 3)] {
        let op = ConeOperator::shifted_laplacian(4, k2.clone(), 12).unwrap();
        let series = fundamental_solution_series(&op, 12).unwrap();
        ok &= series.pi_power == -2;
        // k(r) = sum_j r^j * (plain + log ln r) * pi^-2 r^-2
        let (p0, l0) = split(&series.terms[0]);
        ok &= p0 == q(rat(-1, 4)) && l0.is_zero();
        for j in 1..=12usize {
            let (plain, log) = split(&series.terms[j]);
            if j % 2 == 1 {
                ok &= plain.is_zero() && log.is_zero();
                continue;
            }
            let m = (j / 2) as u64;
            let d = Rational::from_integer(BigInt::from(2).pow(2 * m as u32)) * fi(m) * fi(m - 1);
            let km = k2.pow(m as i32);
            let want_log = -(&km / (rat_int(2) * &d));
            let hsum = harmonic(m) + harmonic(m - 1) - rat_int(1);
            let want_plain = &km * hsum / (rat_int(4) * &d);
            ok &= log == q(want_log) && plain == q(want_plain);
        }
        // closed form with the Bessel sum: -(kappa^2/(4 pi^2)) (kappa r)^-1 I_1(kappa r) ln r
        for k in 0..=5u64 {
            let (_, log) = split(&series.terms[2 * k as usize + 2]);
            let want = -k2.pow(k as i32 + 1) / (rat_int(8) * Rational::from_integer(BigInt::from(2).pow(2 * k as u32)) * fi(k) * fi(k + 1));
            ok &= log == q(want);
        }
    }
    report(
        2,
        ok,
        "n=4 ln r coefficients -kappa^{2m}/(2^{2m} m!(m-1)! 2 pi^2) and harmonic constants, exact through order 12 (kappa^2 in {1, 7/3})",
    )
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    for z in [rat_int(1), rat(-3, 2)] {
        let op = ConeOperator::coulomb(z.clone(), Rational::zero(), 12).unwrap();
        let series = fundamental_solution_series(&op, 12).unwrap();
        ok &= series.pi_power == -1;
        // k(r) = -(1/(4 pi r)) [1 - 2 Z r ln r + sum_p c_p r^p (ln r - (H_p + H_{p-1} - 1))]
        let quarter = rat(-1, 4);
        let (p0, l0) = split(&series.terms[0]);
        ok &= p0 == q(quarter.clone()) && l0.is_zero();
        let (p1, l1) = split(&series.terms[1]);
        ok &= p1.is_zero() && l1 == q(&quarter * rat_int(-2) * &z);
        for p in 2..=12u64 {
            let sign = if p % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            let c = sign * rat_int(2).pow(p as i32) * z.pow(p as i32) / (fi(p) * fi(p - 1));
            let (plain, log) = split(&series.terms[p as usize]);
            ok &= log == q(&quarter * &c);
            ok &= plain == q(-(&quarter * &c * (harmonic(p) + harmonic(p - 1) - rat_int(1))));
        }
    }
    report(3, ok, "Coulomb kappa=0 coefficients with (H_p + H_{p-1} - 1) constants, exact through p=12 (Z in {1, -3/2})")
}

fn criterion_4() -> Outcome {
    let (mut a, mut b) = (BigUint::one(), BigUint::one());
    let mut ok = true;
    for p in 0..=25u64 {
        // F(1) = F(2) = 1 and |S_p| = F(p+1)
        ok &= cardinality(p) == a && cardinality_binomial(p) == a;
        if p <= 20 {
            ok &= BigUint::from(enumerate_words(p).len()) == a;
        }
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    report(4, ok, "|S_p| = Fibonacci = binomial sum for p <= 25; enumeration for p <= 20")
}

fn builtins() -> Vec<ConeOperator> {
    vec![
        ConeOperator::shifted_laplacian(3, rat(2, 3), 8).unwrap(),
        ConeOperator::shifted_laplacian(4, rat_int(1), 8).unwrap(),
        ConeOperator::coulomb(rat_int(1), rat(1, 4), 8).unwrap(),
        ConeOperator::coulomb(rat(-2, 3), rat_int(3), 8).unwrap(),
    ]
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    for op in builtins() {
        for ell in 0..=3 {
            ok &= defining_identity_check(&op, ell, 8).unwrap().holds;
        }
    }
    report(5, ok, "sum_i h_{j-i}^(-1)(w+2-i) h_i(w) = delta_{j0} exactly, j <= 8, ell <= 3, shifted n=3,4 and Coulomb")
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    for op in builtins().into_iter().skip(2) {
        for ell in 0..=3 {
            for p in 0..=8u64 {
                ok &= word_symbol(&op, ell, p).unwrap() == *asymptotic_symbol(&op, ell, p as usize).unwrap();
            }
        }
    }
    report(6, ok, "word sum equals recursion, exact, p <= 8, ell <= 3, two Coulomb parameter sets")
}

fn criterion_7() -> Outcome {
    let tol = 1e-10;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for op in builtins() {
        for ell in 0..=3 {
            for j in 0..=6 {
                let sym = asymptotic_symbol(&op, ell, j).unwrap();
                count += sym.factors().len();
                worst = worst.max(residue_agreement(&sym).unwrap());
            }
        }
    }
    report(7, worst <= tol, format!("{count} poles, j <= 6, ell <= 3: max rel deviation {worst:.2e} (tol {tol:.0e})"))
}

fn bumps() -> Vec<RadialTestFunction> {
    vec![
        RadialTestFunction::bump(1.0).unwrap(),
        RadialTestFunction::bump(0.6).unwrap(),
        RadialTestFunction::poly_bump(1.4, &[1.0, 0.5, -0.8]).unwrap(),
        RadialTestFunction::poly_bump(0.9, &[-2.0, 0.0, 1.0]).unwrap(),
    ]
}

fn pairing_worst(op: &ConeOperator, order: usize) -> f64 {
    let series = fundamental_solution_series(op, order).unwrap();
    let fs = |r: f64| series.partial_sum(r, order);
    bumps()
        .iter()
        .map(|t| {
            let p = distributional_pairing(op, &fs, t, 1e-10).unwrap();
            rel(p.value, p.expected)
        })
        .fold(0.0, f64::max)
}

fn criterion_8() -> Outcome {
    let tol = 1e-6;
    let cases = [
        ("laplacian n=3", ConeOperator::laplacian(3, 4).unwrap()),
        ("shifted n=3 kappa=1", ConeOperator::shifted_laplacian(3, rat_int(1), 30).unwrap()),
        ("shifted n=4 kappa=1", ConeOperator::shifted_laplacian(4, rat_int(1), 30).unwrap()),
        ("coulomb Z=1 kappa=0", ConeOperator::coulomb(rat_int(1), Rational::zero(), 30).unwrap()),
        ("coulomb Z=1 kappa=1/2", ConeOperator::coulomb(rat_int(1), rat(1, 4), 30).unwrap()),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, op) in &cases {
        let w = pairing_worst(op, 30);
        ok &= w <= tol;
        parts.push(format!("{name} {w:.1e}"));
    }
    let shifted = &cases[1].1;
    let wrong = |r: f64| -1.0 / (4.0 * PI * r);
    let t = RadialTestFunction::bump(1.0).unwrap();
    let neg = distributional_pairing(shifted, &wrong, &t, 1e-10).unwrap();
    let dev = (neg.value - neg.expected).abs();
    ok &= dev > 1e-2;
    report(
        8,
        ok,
        format!(
            "{} bumps, max rel err: {} (tol {tol:.0e}); negative control deviation {dev:.3}",
            bumps().len(),
            parts.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let tol = 1e-8;
    let kappa = 0.5;
    let op = ConeOperator::shifted_laplacian(3, rat(1, 4), 30).unwrap();
    let table = kernel_table(&op, 6, 30, &default_contour(&op)).unwrap();
    let mut worst: f64 = 0.0;
    for r in [0.3, 0.8, 1.5] {
        for rt in [0.2, 0.6, 1.1] {
            for angle in [0.0, 1.2, 2.8] {
                let a = kernel_eval_table(&op, &table, r, rt, angle).unwrap().value;
                let b = parametrix_kernel_n3(kappa, r, rt, angle, 6).unwrap();
                worst = worst.max((a - b).abs());
            }
        }
    }
    report(9, worst <= tol, format!("3x3x3 grid, kappa=1/2, ell <= 6, order 30: max abs diff {worst:.2e} (tol {tol:.0e})"))
}

fn criterion_10() -> Outcome {
    let tol = 1e-6;
    let kappa = 0.5;
    let mut worst: f64 = 0.0;
    for (r, rt) in [(2.0, 1.0), (1.0, 0.3), (0.5, 1.5)] {
        for (angle, d) in [(0.0, f64::abs(r - rt)), (PI, r + rt)] {
            let g = green_kernel_n3(kappa, r, rt, angle, 60).unwrap();
            worst = worst.max((g + (-kappa * d).exp() / (4.0 * PI * d)).abs());
        }
    }
    let op = ConeOperator::shifted_laplacian(3, rat(1, 4), 2).unwrap();
    let atol = 1e-8;
    let mut ann: f64 = 0.0;
    let mut decided = true;
    for ell in 0..=4u32 {
        let f = move |r: f64| difference_factor_r(ell, kappa, r).unwrap();
        let rep = annihilation_check(&op, &f, ell as usize, &[0.3, 0.7, 1.0, 1.8, 3.0], 1e-3).unwrap();
        decided &= rep.passes(atol).is_ok();
        ann = ann.max(rep.max_residual);
    }
    report(
        10,
        worst <= tol && ann < atol && decided,
        format!("Green kernel vs -exp(-kappa d)/(4 pi d): max abs err {worst:.2e} (tol {tol:.0e}); difference factors annihilated to {ann:.2e} (tol {atol:.0e})"),
    )
}

fn criterion_11() -> Outcome {
    let tol = 1e-6;
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [3u32, 4, 5] {
        let a = standard_fs(n, 1e-4, 1.0).unwrap();
        let b = laplace_fs(n, 1.0);
        let d = (a - b).abs();
        ok &= d <= tol;
        parts.push(format!("n={n} {d:.2e}"));
    }
    report(11, ok, format!("kappa=1e-4, r=1, abs diff to Laplace: {} (tol {tol:.0e})", parts.join(", ")))
}

fn criterion_12() -> Outcome {
    let tol = 1e-12;
    let ptol = 1e-6;
    let mut worst: f64 = 0.0;
    let mut pworst: f64 = 0.0;
    for (mu_sq, mu) in [(rat_int(1), 1.0), (rat(9, 4), 1.5)] {
        let op = ConeOperator::shifted_laplacian(3, -mu_sq, 40).unwrap();
        let series = fundamental_solution_series(&op, 40).unwrap();
        for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let v = series.partial_sum(r, 40);
            worst = worst.max(rel(v, -(mu * r).cos() / (4.0 * PI * r)));
        }
        let fs = |r: f64| series.partial_sum(r, 40);
        for t in bumps() {
            let p = distributional_pairing(&op, &fs, &t, 1e-10).unwrap();
            pworst = pworst.max(rel(p.value, p.expected));
        }
    }
    report(
        12,
        worst <= tol && pworst <= ptol,
        format!("kappa^2 = -mu^2 (mu in {{1, 3/2}}) vs -cos(mu r)/(4 pi r): max rel err {worst:.2e} (tol {tol:.0e}); pairing max rel err {pworst:.1e} (tol {ptol:.0e})"),
    )
}

#[test]
fn acceptance() {
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
    ];
    for o in &outcomes {
        let mark = if o.passed { "PASS" } else { "FAIL" };
        let known = if !o.passed && KNOWN_FAILURES.contains(&o.id) { " (known, see README)" } else { "" };
        // written to the raw handle so the lines survive the test harness's output capture
        writeln!(std::io::stderr(), "criterion {:>2}: {mark}{known}: {}", o.id, o.detail).unwrap();
    }
    let unexpected: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.passed && !KNOWN_FAILURES.contains(&o.id))
        .map(|o| o.id)
        .collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:?}");
    // a known failure that starts passing should be taken off the list
    let fixed: Vec<u32> = outcomes.iter().filter(|o| o.passed && KNOWN_FAILURES.contains(&o.id)).map(|o| o.id).collect();
    assert!(fixed.is_empty(), "criteria now passing but listed as known failures: {fixed:?}");
}
