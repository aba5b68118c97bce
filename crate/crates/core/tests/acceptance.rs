//! Exit criteria. Each criterion prints one PASS/FAIL line; the test fails
//! if any criterion fails. Run with `--nocapture` to see the lines.

use std::time::{Duration, Instant};

use chainratio::design::{draw_two_phase, substream, DesignSpec};
use chainratio::estimators::{alpha_opt, k_yz, theta, transform_for, AuxTransform, EstimatorId};
use chainratio::mse::{
    analytic_table, analytic_table_for, efficiency_gap, min_mse_combined, mse_chain, mse_combined,
    mse_two_phase_ratio,
};
use chainratio::population::PopulationSummary;
use chainratio::simulate::{
    enumerate_exact, generate_population, run_monte_carlo, EnumConfig, GenSpec, SimConfig,
};
use chainratio::{Error, EstimatorSuite, SampleMeans};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Reference PRE values for N = 25, n' = 10, n = 7.
const REFERENCE_PRE: [(&str, f64); 8] = [
    ("rd", 122.5393),
    ("t1", 178.8189),
    ("t2", 178.8405),
    ("t3", 178.8277),
    ("t4", 186.3912),
    ("t5", 181.6025),
    ("t7", 179.9636),
    ("tstar", 186.6515),
];

fn reference_table() -> Outcome {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_chainratio"))
        .args(["evaluate", "--nprime", "10", "--n", "7", "--format", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || {
        format!("exit status {}", out.status)
    })?;
    let table: chainratio::EvaluationTable =
        serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (name, want) in REFERENCE_PRE {
        let got = table
            .row(name)
            .and_then(|r| r.pre)
            .ok_or(format!("no PRE for {name}"))?;
        worst = worst.max((got - want).abs());
        check((got - want).abs() <= 0.01, || {
            format!("{name}: {got:.4} vs {want}")
        })?;
    }
    Ok(format!("max |PRE - reference| = {worst:.5}"))
}

/// θ6 = β1·Z̄/(β1·Z̄ + σ_z) and the chain MSE evaluated by hand from the
/// bundled summary constants, independent of the crate's code paths.
fn t6_hand_oracle() -> f64 {
    let (y, z, sz, cy, cx, cz) = (183.84f64, 151.12f64, 7.224, 0.0546, 0.0526, 0.0488);
    let (rxy, ryz, b1) = (0.7108, 0.6932, 0.002);
    let (f1, f2, f3) = (
        1.0 / 7.0 - 1.0 / 25.0,
        1.0 / 10.0 - 1.0 / 25.0,
        1.0 / 7.0 - 1.0 / 10.0,
    );
    let th = b1 * z / (b1 * z + sz);
    let var = y * y * f1 * cy * cy;
    let mse = y
        * y
        * (f1 * cy * cy
            + f2 * (th * th * cz * cz - 2.0 * th * ryz * cy * cz)
            + f3 * (cx * cx - 2.0 * rxy * cy * cx));
    100.0 * var / mse
}

/// Frozen value of [`t6_hand_oracle`]. The reference table lists 122.5473.
const T6_PRE_FORMULA: f64 = 126.93758164514479;

fn t6_formula_value() -> Outcome {
    let oracle = t6_hand_oracle();
    check((oracle - T6_PRE_FORMULA).abs() < 1e-9, || {
        format!("oracle drifted: {oracle}")
    })?;
    let table = analytic_table(
        &PopulationSummary::anderson(),
        &DesignSpec::new(25, 10, 7).unwrap(),
    )
    .map_err(|e| e.to_string())?;
    let got = table.row("t6").and_then(|r| r.pre).ok_or("no t6 row")?;
    check((got - T6_PRE_FORMULA).abs() <= 0.01, || {
        format!("t6 PRE {got} vs {T6_PRE_FORMULA}")
    })?;
    Ok(format!(
        "t6 PRE = {got:.4} (formula), reference table 122.5473"
    ))
}

fn random_summary<R: Rng>(rng: &mut R) -> PopulationSummary {
    let mut s = PopulationSummary::anderson();
    s.n_population = rng.gen_range(20..5000);
    s.mean_y = rng.gen_range(1.0..1000.0);
    s.mean_x = rng.gen_range(1.0..1000.0);
    s.mean_z = rng.gen_range(1.0..1000.0);
    s.cv_y = rng.gen_range(0.01..1.0);
    s.cv_x = rng.gen_range(0.01..1.0);
    s.cv_z = rng.gen_range(0.01..1.0);
    s.rho_xy = rng.gen_range(-1.0..1.0);
    s.rho_xz = rng.gen_range(-1.0..1.0);
    s.rho_yz = rng.gen_range(-1.0..1.0);
    s
}

fn random_design<R: Rng>(rng: &mut R, n_population: usize) -> DesignSpec {
    let n_first = rng.gen_range(2..=n_population);
    let n_second = rng.gen_range(2..=n_first);
    DesignSpec::new(n_population, n_first, n_second).unwrap()
}

fn algebraic_identities() -> Outcome {
    let mut rng = substream(3, 0);
    let tuples = 5000;
    let mut worst = [0.0f64; 3];
    for _ in 0..tuples {
        let s = random_summary(&mut rng);
        let d = random_design(&mut rng, s.n_population);
        let f = d.factors();
        let th: f64 = loop {
            let t: f64 = rng.gen_range(-2.0..2.0);
            if (1.0 - t).abs() > 1e-3 {
                break t;
            }
        };
        let m0 = min_mse_combined(&s, &f);
        let a = alpha_opt(th, k_yz(&s).unwrap()).unwrap();

        let da = (mse_combined(&s, &f, th, a) - m0).abs() / m0.abs().max(1e-300);
        // A difference of two MSEs is only known to within eps times their
        // size, so the identities are measured relative to the largest term.
        let gap = f.f2 * s.mean_y * s.mean_y * (th * s.cv_z - s.rho_yz * s.cv_y).powi(2);
        let chain = mse_chain(&s, &f, th);
        let db = ((chain - m0) - gap).abs() / chain.abs().max(m0.abs()).max(gap).max(1e-300);
        let rd_gap = f.f2 * s.mean_y * s.mean_y * s.rho_yz * s.rho_yz * s.cv_y * s.cv_y;
        let rd = mse_two_phase_ratio(&s, &f);
        let dc = ((rd - m0) - rd_gap).abs() / rd.abs().max(m0.abs()).max(rd_gap).max(1e-300);
        let dd = (f.f1 - (f.f2 + f.f3)).abs();
        worst[0] = worst[0].max(da);
        worst[1] = worst[1].max(db);
        worst[2] = worst[2].max(dc);
        check(da <= 1e-10, || {
            format!("(a) mse_combined(alpha_opt) vs M_o: {da:e}")
        })?;
        check(db <= 1e-10, || format!("(b) chain gap: {db:e}"))?;
        check(dc <= 1e-10, || format!("(c) rd gap: {dc:e}"))?;
        check(dd <= 1e-15, || {
            format!("(d) f1 - f2 - f3 = {dd:e} for {d:?}")
        })?;
        check(
            (efficiency_gap(&s, &f, th) - gap).abs() <= 1e-10 * gap.max(1e-300),
            || "efficiency_gap disagrees with closed form".into(),
        )?;
    }
    Ok(format!(
        "{tuples} tuples; worst relative deviations (a) {:.1e} (b) {:.1e} (c) {:.1e}",
        worst[0], worst[1], worst[2]
    ))
}

fn grid_optimality() -> Outcome {
    let mut rng = substream(4, 0);
    let mut worst: f64 = 0.0;
    let mut tuples = 0;
    while tuples < 100 {
        let s = random_summary(&mut rng);
        let d = random_design(&mut rng, s.n_population);
        let f = d.factors();
        let th: f64 = rng.gen_range(0.05..0.95);
        let a = alpha_opt(th, k_yz(&s).unwrap()).unwrap();
        if !(-2.0..=3.0).contains(&a) || f.f2 == 0.0 {
            continue;
        }
        tuples += 1;
        let steps = 500_000;
        let (mut best_a, mut best) = (f64::NAN, f64::INFINITY);
        for k in 0..=steps {
            let alpha = -2.0 + k as f64 * 1e-5;
            let m = mse_combined(&s, &f, th, alpha);
            if m < best {
                best = m;
                best_a = alpha;
            }
        }
        worst = worst.max((best_a - a).abs());
        check((best_a - a).abs() <= 1e-4, || {
            format!("grid {best_a} vs closed form {a}")
        })?;
    }
    Ok(format!(
        "100 tuples; max |grid argmin - alpha_opt| = {worst:.2e}"
    ))
}

fn tiny_population() -> chainratio::FinitePopulation {
    let spec = GenSpec {
        n_population: 12,
        target_means: [183.84, 185.72, 151.12],
        target_cvs: [0.03, 0.03, 0.03],
        target_rhos: [0.7108, 0.7346, 0.6932],
        seed: 12,
        round_to_integers: false,
    };
    generate_population(&spec).unwrap().population
}

const TINY_SET: [EstimatorId; 6] = [
    EstimatorId::Ybar,
    EstimatorId::TwoPhaseRatio,
    EstimatorId::T1,
    EstimatorId::T4,
    EstimatorId::T5,
    EstimatorId::TStar4,
];

fn enumeration_oracle() -> Outcome {
    let pop = tiny_population();
    let s = chainratio::population::summarize(&pop).unwrap();
    check(s.cv_y <= 0.05 && s.cv_x <= 0.05 && s.cv_z <= 0.05, || {
        format!("CVs {} {} {} exceed 0.05", s.cv_y, s.cv_x, s.cv_z)
    })?;
    let d = DesignSpec::new(12, 6, 3).unwrap();
    let exact =
        enumerate_exact(&pop, &d, &TINY_SET, &EnumConfig::default()).map_err(|e| e.to_string())?;
    check(exact.outcome_count == 18_480, || {
        format!("{} outcomes", exact.outcome_count)
    })?;
    let ybar = exact.record("ybar").unwrap();
    let bias = (ybar.exact_bias / exact.population_mean_y).abs();
    check(bias <= 1e-10, || format!("E[ybar] relative bias {bias:e}"))?;

    let analytic = analytic_table_for(&s, &d, &TINY_SET).unwrap();
    let mut devs = Vec::new();
    for name in ["t1", "t4", "tstar4"] {
        let e = exact.record(name).unwrap().exact_mse;
        let a = analytic.row(name).unwrap().mse;
        let dev = rel(e, a);
        devs.push(format!("{name} {dev:.3}"));
        check(dev <= 0.30, || {
            format!("{name}: exact {e} vs first-order {a} ({dev:.3})")
        })?;
    }
    Ok(format!(
        "E[ybar] bias {bias:.1e}; |exact/analytic - 1|: {}",
        devs.join(", ")
    ))
}

fn monte_carlo_convergence() -> Outcome {
    let pop = tiny_population();
    let d = DesignSpec::new(12, 6, 3).unwrap();
    let ids = EstimatorId::ALL;
    let exact = enumerate_exact(&pop, &d, &ids, &EnumConfig::default()).unwrap();
    let cfg = SimConfig::new(1_000_000, 6);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one
        .install(|| run_monte_carlo(&pop, &d, &ids, &cfg))
        .map_err(|e| e.to_string())?;
    let b = four
        .install(|| run_monte_carlo(&pop, &d, &ids, &cfg))
        .map_err(|e| e.to_string())?;
    check(a == b, || "1-thread and 4-thread runs differ".into())?;
    let bits = |r: &chainratio::simulate::SimResult| {
        r.records
            .iter()
            .map(|x| x.empirical_mse.to_bits())
            .collect::<Vec<_>>()
    };
    check(bits(&a) == bits(&b), || "MSE bit patterns differ".into())?;
    let mut worst: f64 = 0.0;
    for rec in &a.records {
        let e = exact.record(&rec.estimator).unwrap().exact_mse;
        let z = (rec.empirical_mse - e).abs() / rec.mse_std_error.unwrap();
        worst = worst.max(z);
        check(z <= 3.0, || {
            format!("{}: {z:.2} standard errors from exact", rec.estimator)
        })?;
    }
    Ok(format!(
        "max |MC - exact| = {worst:.2} SE over {} estimators; runs bit-identical",
        a.records.len()
    ))
}

fn desk_scale_analog() -> Outcome {
    let g = generate_population(&GenSpec::anderson_like(2000, 1958)).map_err(|e| e.to_string())?;
    let d = DesignSpec::new(2000, 200, 70).unwrap();
    let ids = [
        EstimatorId::Ybar,
        EstimatorId::TwoPhaseRatio,
        EstimatorId::T1,
        EstimatorId::T4,
        EstimatorId::TStar4,
    ];
    let sim = run_monte_carlo(&g.population, &d, &ids, &SimConfig::new(200_000, 7))
        .map_err(|e| e.to_string())?;
    let analytic = analytic_table_for(&g.realized, &d, &ids).unwrap();
    let mut devs = Vec::new();
    for name in ["rd", "t1", "t4", "tstar4"] {
        let e = sim.record(name).unwrap().empirical_pre.unwrap();
        let a = analytic.row(name).unwrap().pre.unwrap();
        devs.push(format!("{name} {e:.2}/{a:.2}"));
        check(rel(e, a) <= 0.10, || {
            format!("{name}: empirical PRE {e} vs analytic {a}")
        })?;
    }
    let mse = |n: &str| sim.record(n).unwrap().empirical_mse;
    check(
        mse("tstar4") <= mse("t4") && mse("t4") <= mse("t1") && mse("t1") <= mse("rd"),
        || {
            format!(
                "ordering violated: t* {} t4 {} t1 {} rd {}",
                mse("tstar4"),
                mse("t4"),
                mse("t1"),
                mse("rd")
            )
        },
    )?;
    Ok(format!(
        "PRE empirical/analytic: {}; ordering t* <= t4 <= t1 <= rd holds",
        devs.join(", ")
    ))
}

fn degeneracy() -> Outcome {
    let pop = tiny_population();
    let s = chainratio::population::summarize(&pop).unwrap();
    let census = DesignSpec::new(12, 12, 12).unwrap();
    let sample = draw_two_phase(&pop, &census, &mut substream(8, 0)).unwrap();
    let suite = EstimatorSuite::new(&s, &EstimatorId::ALL).unwrap();
    let exact_means = SampleMeans {
        mean_y_second: s.mean_y,
        mean_x_second: s.mean_x,
        mean_x_first: s.mean_x,
        mean_z_first: s.mean_z,
    };
    for id in EstimatorId::ALL {
        // Exact population means collapse every ratio to 1.
        let v = suite.evaluate(id, &exact_means).unwrap();
        check(v == s.mean_y, || format!("{id}: {v} != {}", s.mean_y))?;
        // The same through a drawn census (sums in a different order).
        let v = suite.evaluate(id, &sample.means).unwrap();
        check(rel(v, s.mean_y) <= 1e-12, || {
            format!("{id} on census draw: {v}")
        })?;
    }
    let table = analytic_table(&s, &census).unwrap();
    check(
        table.rows.iter().all(|r| r.mse == 0.0 && r.pre.is_none()),
        || "census analytic MSEs not all zero".into(),
    )?;
    let th = theta(&AuxTransform::chand(), s.mean_z).unwrap();
    check(th == 1.0, || format!("theta(1, 0) = {th}"))?;
    check(
        matches!(alpha_opt(th, k_yz(&s).unwrap()), Err(Error::ThetaIsOne)),
        || "alpha_opt accepted theta = 1".into(),
    )?;
    let t1 = transform_for(EstimatorId::T1, &s).unwrap();
    check((t1.a, t1.b) == (1.0, 0.0), || "t1 transform".into())?;
    Ok("census returns the population mean for all 16 estimators; analytic MSEs 0; alpha_opt(theta=1) errors".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        (
            "reference PRE table",
            reference_table,
            Duration::from_secs(1),
        ),
        ("t6 formula value", t6_formula_value, Duration::from_secs(1)),
        (
            "algebraic identities",
            algebraic_identities,
            Duration::from_secs(5),
        ),
        ("grid optimality", grid_optimality, Duration::from_secs(10)),
        (
            "enumeration oracle",
            enumeration_oracle,
            Duration::from_secs(10),
        ),
        (
            "Monte Carlo convergence",
            monte_carlo_convergence,
            Duration::from_secs(60),
        ),
        (
            "desk-scale analog",
            desk_scale_analog,
            Duration::from_secs(60),
        ),
        ("degeneracy", degeneracy, Duration::from_secs(1)),
    ];
    // Start on a fresh line: libtest has already printed "test acceptance ... ".
    println!();
    let mut failures = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS {name} ({:.2}s): {msg}", elapsed.as_secs_f64()),
            Err(msg) => {
                failures += 1;
                println!("FAIL {name} ({:.2}s): {msg}", elapsed.as_secs_f64());
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
