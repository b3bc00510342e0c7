//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line to stderr
//! (bypassing output capture) and then asserts.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use ewens_pitman::inference::{
    discovery_asymptotic, discovery_estimate, expected_new_blocks, m1_estimate, posterior_k_pmf,
    M1Variant,
};
use ewens_pitman::ldp::{closed_half_cubic, closed_half_root, rate_closed_half, BlockFrequencyLdp};
use ewens_pitman::moments::{ln_mgf_m, sandwich_bounds};
use ewens_pitman::partition::{rng_for, sample_conditional};
use ewens_pitman::verify::{self, standard_grid, VerifyOptions, SANDWICH_POINTS};
use ewens_pitman::Params;
use rand::{Rng, SeedableRng};

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "criterion {id:>2} {status} {name}: {detail}"
    );
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn eptool(args: &[&str]) -> (Vec<u8>, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_eptool"))
        .args(args)
        .output()
        .expect("eptool runs");
    let elapsed = start.elapsed();
    assert!(
        out.status.success(),
        "eptool {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    (out.stdout, elapsed)
}

/// Printed table values in thousandths:
/// `(m label, [exact, uncorrected, corrected])` per row.
type Printed = [(&'static str, [i64; 3]); 5];

const DISCOVERY_NN: Printed = [
    ("n/100", [472, 5438, 472]),
    ("n/10", [456, 1696, 456]),
    ("n", [357, 538, 357]),
    ("10n", [160, 314, 160]),
    ("100n", [54, 54, 54]),
];
const DISCOVERY_N: Printed = [
    ("n/100", [516, 5770, 516]),
    ("n/10", [500, 1923, 500]),
    ("n", [397, 606, 397]),
    ("10n", [180, 288, 180]),
    ("100n", [60, 61, 60]),
];
const SINGLETONS_NN: Printed = [
    ("n/100", [54268, 5438, 54268]),
    ("n/10", [5213, 1696, 5213]),
    ("n", [752, 538, 752]),
    ("10n", [178, 314, 178]),
    ("100n", [54, 54, 54]),
];
const SINGLETONS_N: Printed = [
    ("n/100", [50316, 5770, 50316]),
    ("n/10", [5865, 1923, 5865]),
    ("n", [812, 606, 812]),
    ("10n", [199, 288, 199]),
    ("100n", [61, 61, 61]),
];

/// Parses a 3-decimal CSV cell into thousandths.
fn thousandths(cell: &str) -> i64 {
    let (int, frac) = cell.split_once('.').expect("3-decimal cell");
    assert_eq!(frac.len(), 3, "cell {cell}");
    int.parse::<i64>().unwrap() * 1000 + frac.parse::<i64>().unwrap()
}

#[test]
fn criterion_01_table_reproduction() {
    const TOL_THOUSANDTHS: i64 = 1;
    let runs = [
        ("mastigamoeba-nn", "206.75", &DISCOVERY_NN, &SINGLETONS_NN),
        ("mastigamoeba-n", "132.92", &DISCOVERY_N, &SINGLETONS_N),
    ];
    let mut total = Duration::ZERO;
    let mut cells = 0;
    let mut misses = Vec::new();
    for (id, theta, discovery, singletons) in runs {
        let dataset = format!("builtin:{id}");
        let (out, t) = eptool(&[
            "tables",
            "--dataset",
            &dataset,
            "--alpha",
            "0.5",
            "--theta",
            theta,
        ]);
        total += t;
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<Vec<&str>> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').collect())
            .collect();
        assert_eq!(rows.len(), 10);
        for (table, expected, offset) in
            [("discovery", discovery, 0), ("singletons", singletons, 5)]
        {
            for (i, (label, want)) in expected.iter().enumerate() {
                let row = &rows[offset + i];
                assert_eq!(row[1], table);
                for (c, column) in ["exact", "uncorrected", "corrected"].iter().enumerate() {
                    cells += 1;
                    let got = thousandths(row[3 + c]);
                    if (got - want[c]).abs() > TOL_THOUSANDTHS {
                        misses.push(format!(
                            "{id} {table} m={label} {column}: {} vs {}",
                            row[3 + c],
                            want[c] as f64 / 1000.0
                        ));
                    }
                }
            }
        }
    }
    let fast = total < Duration::from_secs(1);
    let pass = misses.is_empty() && fast;
    let detail = format!(
        "{}/{cells} cells within 0.001, runtime {:.3}s{}{}",
        cells - misses.len(),
        total.as_secs_f64(),
        if misses.is_empty() { "" } else { "; off: " },
        misses.join("; ")
    );
    report(1, "table reproduction", pass, &detail);
}

#[test]
fn criterion_02_empirical_bayes_fit() {
    let fit = |id: &str, j_theta: f64| -> (f64, bool) {
        let dataset = format!("builtin:{id}");
        let (out, _) = eptool(&[
            "fit",
            "--dataset",
            &dataset,
            "--fit",
            "mean",
            "--alpha",
            "0.5",
        ]);
        let text = String::from_utf8(out).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        let theta: f64 = row[5].parse().unwrap();
        (theta, (theta - j_theta).abs() <= 0.01)
    };
    let (a, ok_a) = fit("mastigamoeba-nn", 206.75);
    let (b, ok_b) = fit("mastigamoeba-n", 132.92);
    report(
        2,
        "empirical Bayes fit",
        ok_a && ok_b,
        &format!("theta = {a:.5} (want 206.75 +- 0.01), {b:.5} (want 132.92 +- 0.01)"),
    );
}

#[test]
fn criterion_03_closed_form_rate() {
    let at_one = (rate_closed_half(1.0).unwrap() - std::f64::consts::LN_2).abs();
    let at_zero = rate_closed_half(0.0).unwrap().abs();
    let worst_cubic = (1..20)
        .map(|i| {
            let x = i as f64 * 0.05;
            closed_half_cubic(x, closed_half_root(x).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    let pass = at_one <= 1e-9 && at_zero <= 1e-12 && worst_cubic <= 1e-9;
    report(
        3,
        "closed-form rate",
        pass,
        &format!("|I(1) - ln 2| = {at_one:e}, |I(0)| = {at_zero:e}, max cubic residual = {worst_cubic:e}"),
    );
}

#[test]
fn criterion_04_rate_cross_validation() {
    let start = Instant::now();
    let half = BlockFrequencyLdp::new(0.5, 1).unwrap();
    let gap = (1..20)
        .map(|i| {
            let x = i as f64 * 0.05;
            (half.rate(x) - rate_closed_half(x).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    let mut domain_ok = true;
    for &alpha in &[0.3, 0.5, 0.8] {
        for l in 1..=3u64 {
            let ldp = BlockFrequencyLdp::new(alpha, l).unwrap();
            domain_ok &= ldp.rate(0.0) == 0.0;
            domain_ok &= ldp.rate(1.0 / l as f64 + 0.01) == f64::INFINITY;
            domain_ok &= ldp.rate(1.0 / l as f64 + 1e-9) == f64::INFINITY;
        }
    }
    let elapsed = start.elapsed();
    let pass = gap <= 1e-6 && domain_ok && elapsed < Duration::from_secs(10);
    report(
        4,
        "rate cross-validation",
        pass,
        &format!(
            "max gap {gap:e}, endpoint behaviour {}, runtime {:.3}s",
            if domain_ok { "ok" } else { "wrong" },
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_05_oracle_equivalence() {
    let r = verify::run(&VerifyOptions {
        max_n: 8,
        sandwich: false,
    })
    .unwrap();
    let wanted = [
        ("rising-moments-vs-enumeration", 1e-10),
        ("mgf-vs-series", 1e-10),
        ("conditional-moments-vs-enumeration", 1e-9),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, tol) in wanted {
        let g = r
            .groups
            .iter()
            .find(|g| g.name == name)
            .expect("group present");
        let ok = g.passed && g.tolerance <= tol && g.max_error <= tol && g.checks > 0;
        pass &= ok;
        parts.push(format!(
            "{name}: {} checks, max error {:e} (tol {tol:e})",
            g.checks, g.max_error
        ));
    }
    report(5, "oracle equivalence", pass, &parts.join("; "));
}

#[test]
fn criterion_06_posterior_pmf() {
    let mut worst_sum = 0.0f64;
    let mut worst_mean = 0.0f64;
    for p in standard_grid() {
        for &(n, j) in &[(1u64, 1u64), (10, 4), (100, 37), (363, 248)] {
            for m in (1..=200).step_by(7).chain([200]) {
                let pmf = posterior_k_pmf(&p, n, j, m).unwrap();
                worst_sum = worst_sum.max((pmf.total() - 1.0).abs());
                let mean = expected_new_blocks(&p, n, j, m).unwrap();
                worst_mean = worst_mean.max((pmf.mean() - mean).abs());
            }
        }
    }
    let reps = 100_000u64;
    let mut mc = Vec::new();
    let mut mc_ok = true;
    for &(alpha, theta) in &[(0.5, 1.0), (0.25, 10.0), (0.0, 2.0)] {
        let p = Params::new(alpha, theta).unwrap();
        let initial = [4u64, 3, 2, 1];
        let m = 40;
        let pmf = posterior_k_pmf(&p, 10, 4, m).unwrap();
        let sum: f64 = (0..reps)
            .map(|rep| {
                sample_conditional(&p, &initial, m, &mut rng_for(20_240, rep))
                    .unwrap()
                    .k_new() as f64
            })
            .sum();
        let mean = sum / reps as f64;
        let se = (pmf.variance() / reps as f64).sqrt();
        let z = (mean - pmf.mean()) / se;
        mc_ok &= z.abs() <= 3.0;
        mc.push(format!("z = {z:.2}"));
    }
    let pass = worst_sum <= 1e-8 && worst_mean <= 1e-8 && mc_ok;
    report(
        6,
        "posterior pmf",
        pass,
        &format!(
            "max |sum - 1| = {worst_sum:e}, max mean gap = {worst_mean:e}, Monte Carlo {}",
            mc.join(", ")
        ),
    );
}

#[test]
fn criterion_07_finite_size_cgf_convergence() {
    let (alpha, l, lambda) = (0.5, 1, 0.7f64);
    let limit = BlockFrequencyLdp::new(alpha, l).unwrap().cgf(lambda);
    let y = -(-lambda).exp_m1();
    let gaps: Vec<f64> = [200u64, 400, 800]
        .iter()
        .map(|&n| (ln_mgf_m(alpha, n, l, y).unwrap() / n as f64 - limit).abs())
        .collect();
    let pass = gaps[0] > gaps[1] && gaps[1] > gaps[2];
    report(
        7,
        "finite-size cgf convergence",
        pass,
        &format!("gaps at n = 200, 400, 800: {gaps:?}"),
    );
}

#[test]
fn criterion_08_sandwich_bounds() {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(alpha, n, j, m, l, y) in &SANDWICH_POINTS {
        assert!(m <= 60);
        let b = sandwich_bounds(alpha, n, j, m, l, y).unwrap();
        pass &= b.holds();
        parts.push(format!(
            "(a={alpha}, n={n}, j={j}, m={m}, l={l}, y={y}): ln {:.3} <= {:.3} <= {:.3}",
            b.lower.ln_abs(),
            b.value.ln_abs(),
            b.upper.ln_abs()
        ));
    }
    report(8, "sandwich bounds", pass, &parts.join("; "));
}

#[test]
fn criterion_09_identity_suite() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let alpha: f64 = rng.random_range(0.01..0.99);
        let theta: f64 = -alpha + rng.random_range(0.01..500.0);
        let n: u64 = rng.random_range(2..2000);
        let j: u64 = rng.random_range(1..=n);
        let m1: u64 = rng.random_range(0..=j);
        let m: u64 = rng.random_range(1..500_000);
        let p = Params::new(alpha, theta).unwrap();
        let d = discovery_estimate(&p, n, j, m).unwrap();
        let dc = discovery_asymptotic(&p, n, j, m, true).unwrap();
        worst = worst.max((d - dc).abs() / d.abs());
        let e = m1_estimate(&p, n, j, m1, m, M1Variant::Exact).unwrap();
        let c = m1_estimate(&p, n, j, m1, m, M1Variant::Corrected).unwrap();
        worst = worst.max((e - c).abs() / e.abs());
    }
    report(
        9,
        "identity suite",
        worst <= 1e-12,
        &format!("max relative gap {worst:e} over 10 points"),
    );
}

#[test]
fn criterion_10_determinism() {
    let commands: [&[&str]; 8] = [
        &[
            "tables",
            "--dataset",
            "builtin:mastigamoeba-nn",
            "--alpha",
            "0.5",
            "--fit",
            "mean",
            "--full-precision",
        ],
        &[
            "tables",
            "--dataset",
            "builtin:mastigamoeba-n",
            "--fit",
            "mle",
            "--format",
            "json",
        ],
        &["rate", "--alpha", "0.3", "--l", "2", "--grid", "50"],
        &[
            "tail",
            "--dataset",
            "builtin:mastigamoeba-n",
            "--alpha",
            "0.5",
            "--theta",
            "132.92",
            "--m-list",
            "36,363",
            "--grid",
            "20",
            "--reps",
            "200",
            "--seed",
            "3",
        ],
        &[
            "fit",
            "--dataset",
            "builtin:mastigamoeba-nn",
            "--format",
            "json",
        ],
        &[
            "simulate", "--alpha", "0.4", "--theta", "2", "--n", "300", "--reps", "500", "--seed",
            "7",
        ],
        &[
            "simulate",
            "--dataset",
            "builtin:mastigamoeba-n",
            "--alpha",
            "0.5",
            "--theta",
            "132.92",
            "--m",
            "100",
            "--reps",
            "300",
            "--seed",
            "7",
            "--format",
            "json",
        ],
        &["verify", "--max-n", "5"],
    ];
    let mut bad = Vec::new();
    for args in commands {
        let run = |threads: &str| {
            let mut a = vec!["--threads", threads];
            a.extend_from_slice(args);
            eptool(&a).0
        };
        let first = run("8");
        let second = run("8");
        let single = run("1");
        if first != second || first != single || first.is_empty() {
            bad.push(args[0]);
        }
    }
    let pass = bad.is_empty();
    report(
        10,
        "determinism",
        pass,
        &if pass {
            format!(
                "{} commands byte-identical across two runs and 1 vs 8 threads",
                commands.len()
            )
        } else {
            format!("differing output: {bad:?}")
        },
    );
}
