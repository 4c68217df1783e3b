//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use galtower::bounds::{
    de_ratio_bounds, genus_bound_coeff, lambda_bound, lambda_table, ram_profile, Rational, LAMBDA_TABLE_MAX,
};
use galtower::ff::{enumerate_field, make_field};
use galtower::linpoly::{euclid_identity_check, lin_compose, splitting_degree, trace_poly, QBase};
use galtower::splitting::{enumerate_chains_h, verify_splitting_f};
use galtower::suite::{run_shifting, run_splitting, CheckResult, RunConfig};
use galtower::tower::{admissible_ks, check_rsu, compute_rsu, f_poly, g_poly, params_from, TowerParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SETS: [(u64, usize, usize); 8] = [
    (2, 2, 1),
    (2, 3, 1),
    (2, 3, 2),
    (3, 2, 1),
    (2, 5, 2),
    (2, 5, 3),
    (4, 2, 1),
    (3, 4, 1),
];

type Verdict = Result<(), String>;

fn params(set: (u64, usize, usize)) -> TowerParams {
    params_from(set.0, set.1, set.2).expect("acceptance sets are admissible")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Verdict {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn checks_ok(checks: &[CheckResult], names: &[&str], min_trials: u64, ctx: &TowerParams) -> Verdict {
    for name in names {
        let c = checks
            .iter()
            .find(|c| c.name == *name)
            .ok_or_else(|| format!("{ctx}: no check {name}"))?;
        ensure(c.ok && c.trials >= min_trials, || {
            format!(
                "{ctx}: {name} {} trials {} failures {:?}",
                c.trials, c.failures, c.witness
            )
        })?;
    }
    Ok(())
}

fn splitting() -> Verdict {
    let cfg = RunConfig::default();
    for set in SETS {
        let t = params(set);
        let start = Instant::now();
        let suite = run_splitting(&t, &cfg).map_err(|e| format!("{t}: {e}"))?;
        let elapsed = start.elapsed();
        ensure(suite.passed, || format!("{t}: splitting failed"))?;
        let expected = t.q().pow(t.n() as u32 - 1);
        for row in &suite.tower_f.fibers {
            ensure(row.roots == expected && row.all_nonzero, || {
                format!("{t}: x={} has {} roots", row.x, row.roots)
            })?;
        }
        ensure(suite.tower_f.fibers.len() as u64 == t.ell() - 1, || {
            format!("{t}: fiber count")
        })?;
        ensure(elapsed <= Duration::from_secs(5), || format!("{t}: took {elapsed:?}"))?;
    }
    // brute force: y + y² + y⁴ = 1 over F_8
    let f8 = make_field(2, 3).map_err(|e| e.to_string())?;
    let one = f8.one();
    let all = enumerate_field(&f8).map_err(|e| e.to_string())?;
    let roots = all.iter().filter(|y| (&(*y + &y.pow(2)) + &y.pow(4)) == one).count();
    ensure(roots == 4, || format!("anchor has {roots} roots"))
}

fn chain_tree() -> Verdict {
    let r = enumerate_chains_h(&params((2, 3, 1)), 3).map_err(|e| e.to_string())?;
    let nodes: Vec<u64> = r.per_level.iter().map(|l| l.nodes).collect();
    ensure(nodes == [1, 4, 16, 64] && r.pole_hits == 0, || {
        format!("nodes {nodes:?}, pole hits {}", r.pole_hits)
    })
}

fn lambda_formula() -> Verdict {
    for (set, want) in [
        ((2, 3, 1), Rational::new(3, 2)),
        ((3, 2, 1), Rational::from_integer(2)),
        ((2, 5, 2), Rational::new(21, 5)),
    ] {
        let got = lambda_bound(&params(set));
        ensure(got == want, || format!("{set:?}: λ = {got}"))?;
    }
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
        for n in 2..=6 {
            for k in admissible_ks(n) {
                let (a, b) = (params((q, n, k)), params((q, n, n - k)));
                ensure(lambda_bound(&a) == lambda_bound(&b), || format!("asymmetric at {a}"))?;
            }
        }
        let t = params((q, 2, 1));
        ensure(lambda_bound(&t) == Rational::from_integer(q as i128 - 1), || {
            format!("{t}: not √ℓ − 1")
        })?;
    }
    Ok(())
}

fn genus_coefficient() -> Verdict {
    let rows = lambda_table(LAMBDA_TABLE_MAX, true).map_err(|e| e.to_string())?;
    ensure(!rows.is_empty(), || "empty sweep".into())?;
    for r in rows {
        let t = params((r.q, r.n, r.k));
        ensure(
            genus_bound_coeff(&t) * lambda_bound(&t) == Rational::from_integer(1),
            || format!("{t}"),
        )?;
    }
    Ok(())
}

fn ramification() -> Verdict {
    let r = ram_profile(&params((2, 3, 1)), 2).map_err(|e| e.to_string())?;
    ensure(
        r.tame_inf == 3
            && r.wild_inf_value == Rational::from_integer(4)
            && r.tame0 == 1
            && r.wild0_value == Rational::from_integer(2)
            && r.epsilon_unknown == [true, true],
        || format!("{r:?}"),
    )?;
    for set in SETS {
        let t = params(set);
        for e in 1..=1000 {
            let d = de_ratio_bounds(&t, e);
            ensure(d.p0 < d.cap0 && d.p_inf < d.cap_inf, || format!("{t}: e_sub={e}"))?;
        }
    }
    Ok(())
}

fn rsu_algebra() -> Verdict {
    for set in SETS {
        let t = params(set);
        let report = verify_splitting_f(&t).map_err(|e| e.to_string())?;
        ensure(!report.solutions.is_empty(), || format!("{t}: no solutions"))?;
        for (x, y) in &report.solutions {
            let rsu = compute_rsu(&t, x, y).map_err(|e| format!("{t}: x={x} y={y}: {e}"))?;
            let c = check_rsu(&t, x, y, &rsu);
            ensure(c.all_ok(), || format!("{t}: x={x} y={y}: {c:?}"))?;
        }
    }
    Ok(())
}

fn shifting_suites() -> Result<Vec<(TowerParams, galtower::suite::ShiftingSuite)>, String> {
    let cfg = RunConfig {
        seed: 7,
        ..RunConfig::default()
    };
    SETS.iter()
        .map(|&set| {
            let t = params(set);
            run_shifting(&t, &cfg).map(|s| (t, s)).map_err(|e| format!("{t}: {e}"))
        })
        .collect()
}

fn adjoint_and_splitting_fields(suites: &[(TowerParams, galtower::suite::ShiftingSuite)]) -> Verdict {
    for (t, s) in suites {
        checks_ok(
            &s.checks,
            &[
                "splitting_degree_f_eq_g",
                "splitting_degree_adjoint",
                "root_spaces_cross_contained",
                "psi_images",
                "psi_bijective",
            ],
            50,
            t,
        )?;
    }
    let t = params((2, 3, 1));
    let f8 = t.field().map_err(|e| e.to_string())?;
    let z = f8.one();
    let f = f_poly(&t, &z).map_err(|e| e.to_string())?;
    let g = g_poly(&t, &z).map_err(|e| e.to_string())?;
    let ones = vec![f8.one(); 3];
    ensure(f.coeffs() == ones.as_slice() && g.coeffs() == ones.as_slice(), || {
        format!("f = {f}, g = {g}")
    })?;
    let (df, dg) = (splitting_degree(&f, 64), splitting_degree(&g, 64));
    ensure(df == Ok(1) && dg == Ok(1), || {
        format!("splitting degrees {df:?} {dg:?}")
    })
}

fn shifting_lemma(suites: &[(TowerParams, galtower::suite::ShiftingSuite)]) -> Verdict {
    for (t, s) in suites {
        ensure(s.pairs >= 200, || format!("{t}: only {} pairs", s.pairs))?;
        checks_ok(
            &s.checks,
            &[
                "prep_ratio_relation",
                "prep_trace_relation",
                "shift_is_next_root",
                "negative_control",
                "root_space_dims",
                "phi_fq_linear",
                "phi_bijective",
            ],
            1,
            t,
        )?;
    }
    Ok(())
}

fn euclid_and_commutation() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [2u64, 3, 4] {
        let base = QBase::new(q).map_err(|e| e.to_string())?;
        let fq = base.field();
        let tr = |i| trace_poly(i, base, &fq).map_err(|e| e.to_string());
        for i in 1..=6 {
            for j in 1..=6 {
                let v = euclid_identity_check(i, j, q, 4, &mut rng).map_err(|e| e.to_string())?;
                ensure(v.passed(), || format!("Euclid q={q} i={i} j={j}: {v:?}"))?;
                let ij = lin_compose(&tr(i)?, &tr(j)?).map_err(|e| e.to_string())?;
                let ji = lin_compose(&tr(j)?, &tr(i)?).map_err(|e| e.to_string())?;
                ensure(ij == ji, || format!("Tr_{i} and Tr_{j} do not commute over F_{q}"))?;
            }
        }
    }
    Ok(())
}

fn determinism() -> Verdict {
    let run = |format: &str| {
        Command::new(env!("CARGO_BIN_EXE_galtower"))
            .args([
                "verify", "2", "3", "1", "--suite", "all", "--seed", "7", "--format", format,
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    for format in ["pretty", "csv", "json"] {
        let (a, b) = (run(format)?, run(format)?);
        ensure(a.status.code() == Some(0), || {
            format!("{format}: exit {:?}", a.status.code())
        })?;
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || {
            format!("{format}: reports differ")
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let suites = shifting_suites();
    let with_suites = |f: fn(&[(TowerParams, galtower::suite::ShiftingSuite)]) -> Verdict| match &suites {
        Ok(s) => f(s),
        Err(e) => Err(e.clone()),
    };
    let results: Vec<(&str, Verdict)> = vec![
        ("splitting of the distinguished place", splitting()),
        ("chain tree node counts", chain_tree()),
        ("λ formula", lambda_formula()),
        ("genus-bound coefficient", genus_coefficient()),
        ("ramification formulas", ramification()),
        ("R/S/u algebra", rsu_algebra()),
        (
            "adjoint and splitting-field equality",
            with_suites(adjoint_and_splitting_fields),
        ),
        ("shifting bijection", with_suites(shifting_lemma)),
        ("Euclid identity and commutation", euclid_and_commutation()),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, verdict)) in results.iter().enumerate() {
        match verdict {
            Ok(()) => println!("criterion {:>2} PASS  {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    let elapsed = start.elapsed();
    println!(
        "acceptance: {} of {} passed in {:.1}s",
        results.len() - failed,
        results.len(),
        elapsed.as_secs_f64()
    );
    if failed == 0 && elapsed < Duration::from_secs(120) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
