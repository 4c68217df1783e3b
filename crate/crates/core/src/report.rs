//! Rendering of parameter sheets, verification reports and λ tables as
//! pretty text, CSV or JSON.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bounds::{
    decimal, genus_bound_coeff, lambda_report_for, ram_profile, ser_rational, BoundsError, LambdaReport, LambdaRow,
    RamificationProfile, Rational,
};
use crate::splitting::SplittingReport;
use crate::suite::{CheckResult, VerifyReport};
use crate::tower::TowerParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

/// Levels shown on a parameter sheet.
pub const SHEET_LEVELS: std::ops::RangeInclusive<usize> = 2..=5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsSheet {
    pub params: TowerParams,
    pub lambda: LambdaReport,
    #[serde(serialize_with = "ser_rational")]
    pub genus_bound_coeff: Rational,
    pub ramification: Vec<RamificationProfile>,
}

pub fn params_sheet(params: &TowerParams) -> Result<ParamsSheet, BoundsError> {
    Ok(ParamsSheet {
        params: *params,
        lambda: lambda_report_for(params)?,
        genus_bound_coeff: genus_bound_coeff(params),
        ramification: SHEET_LEVELS.map(|i| ram_profile(params, i)).collect::<Result<_, _>>()?,
    })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(&row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn exact(r: &Rational) -> String {
    format!("{r} ({})", decimal(r))
}

pub fn render_params(sheet: &ParamsSheet, format: Format) -> String {
    let t = &sheet.params;
    let lam = &sheet.lambda;
    match format {
        Format::Json => json(sheet),
        Format::Csv => {
            let mut rows = vec![
                vec!["q".into(), t.q().to_string()],
                vec!["n".into(), t.n().to_string()],
                vec!["k".into(), t.k().to_string()],
                vec!["p".into(), t.p().to_string()],
                vec!["e".into(), t.e().to_string()],
                vec!["ell".into(), t.ell().to_string()],
                vec!["a".into(), t.a().to_string()],
                vec!["b".into(), t.b().to_string()],
                vec!["lambda".into(), lam.lambda_bound.to_string()],
                vec!["dv_bound".into(), format!("{:.6}", lam.dv_bound)],
                vec!["ratio".into(), format!("{:.6}", lam.ratio)],
                vec!["best_k".into(), lam.best_k_flag.to_string()],
                vec!["dv_optimal".into(), lam.dv_optimal.to_string()],
                vec!["genus_bound_coeff".into(), sheet.genus_bound_coeff.to_string()],
            ];
            for r in &sheet.ramification {
                rows.push(vec![format!("e0_level{}", r.level), r.e0_symbolic()]);
                rows.push(vec![format!("e_inf_level{}", r.level), r.e_inf_symbolic()]);
            }
            csv_table(&["key", "value"], rows)
        }
        Format::Pretty => {
            let mut s = String::new();
            let _ = writeln!(s, "tower {t}");
            let _ = writeln!(s, "  p = {}, e = {}, ℓ = {}", t.p(), t.e(), t.ell());
            let _ = writeln!(s, "  a = {}, b = {}", t.a(), t.b());
            let _ = writeln!(s, "  λ bound            {}", exact(&lam.lambda_bound));
            let _ = writeln!(s, "  √ℓ − 1             {:.6}", lam.dv_bound);
            let _ = writeln!(s, "  ratio              {:.6}", lam.ratio);
            let _ = writeln!(s, "  best k for (q, n)  {}", yes_no(lam.best_k_flag));
            let _ = writeln!(s, "  DV-optimal         {}", yes_no(lam.dv_optimal));
            let _ = writeln!(s, "  genus coefficient  {}", exact(&sheet.genus_bound_coeff));
            let _ = writeln!(s, "ramification (ε₁, ε₂ ≥ 0 unknown)");
            for r in &sheet.ramification {
                let _ = writeln!(s, "  {r}");
            }
            s
        }
    }
}

pub fn render_lambda_table(rows: &[LambdaRow], format: Format) -> String {
    match format {
        Format::Json => json(&rows),
        Format::Csv => csv_table(
            &[
                "q",
                "n",
                "k",
                "a",
                "b",
                "lambda_num",
                "lambda_den",
                "dv_bound",
                "ratio",
                "best_k",
            ],
            rows.iter().map(|r| {
                vec![
                    r.q.to_string(),
                    r.n.to_string(),
                    r.k.to_string(),
                    r.a.to_string(),
                    r.b.to_string(),
                    r.lambda_num.to_string(),
                    r.lambda_den.to_string(),
                    format!("{:.6}", r.dv_bound),
                    format!("{:.6}", r.ratio),
                    r.best_k.to_string(),
                ]
            }),
        ),
        Format::Pretty => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:>6} {:>4} {:>3} {:>3} {:>4} {:>4} {:>22} {:>11} {:>9}",
                "ℓ", "q", "n", "k", "a", "b", "λ", "√ℓ − 1", "ratio"
            );
            for r in rows {
                let best = if r.k == r.best_k { "*" } else { "" };
                let _ = writeln!(
                    s,
                    "{:>6} {:>4} {:>3} {:>3} {:>4} {:>4} {:>22} {:>11.6} {:>9.6}{best}",
                    r.ell(),
                    r.q,
                    r.n,
                    r.k,
                    r.a,
                    r.b,
                    exact(&r.lambda()),
                    r.dv_bound,
                    r.ratio
                );
            }
            s
        }
    }
}

fn splitting_rows(t: &TowerParams, f: &SplittingReport, h: &SplittingReport) -> Vec<Vec<String>> {
    let lead = || vec![t.q().to_string(), t.n().to_string(), t.k().to_string()];
    let mut rows = Vec::new();
    for x in &f.fibers {
        let mut r = lead();
        r.extend([
            f.mode.as_str().to_string(),
            "1".into(),
            x.roots.to_string(),
            x.expected.to_string(),
            x.ok.to_string(),
        ]);
        rows.push(r);
    }
    for l in &h.per_level {
        let mut r = lead();
        r.extend([
            h.mode.as_str().to_string(),
            l.level.to_string(),
            l.nodes.to_string(),
            l.expected_nodes.to_string(),
            l.ok.to_string(),
        ]);
        rows.push(r);
    }
    rows
}

fn check_rows(t: &TowerParams, checks: &[CheckResult]) -> Vec<Vec<String>> {
    checks
        .iter()
        .map(|c| {
            vec![
                t.q().to_string(),
                t.n().to_string(),
                t.k().to_string(),
                c.name.clone(),
                c.trials.to_string(),
                c.failures.to_string(),
                c.ok.to_string(),
            ]
        })
        .collect()
}

fn pretty_checks(s: &mut String, checks: &[CheckResult]) {
    for c in checks {
        let _ = write!(s, "  {:<28} {:>6} trials {:>4} failures", c.name, c.trials, c.failures);
        if c.skipped > 0 {
            let _ = write!(s, " {:>3} skipped", c.skipped);
        }
        let _ = writeln!(s, "  {}", pass_fail(c.ok));
        if let Some(w) = &c.witness {
            let _ = writeln!(s, "    witness: {w}");
        }
    }
}

fn pretty_splitting(s: &mut String, r: &SplittingReport) {
    for l in &r.per_level {
        let _ = writeln!(
            s,
            "  {} level {}: {}/{} nodes  {}",
            r.mode.as_str(),
            l.level,
            l.nodes,
            l.expected_nodes,
            pass_fail(l.ok)
        );
    }
    if r.pole_hits > 0 {
        let _ = writeln!(s, "  {} pole hits: {}", r.mode.as_str(), r.pole_hits);
    }
    for w in &r.failures {
        let _ = writeln!(s, "    witness: {} [{}]", w.reason, w.chain.join(" -> "));
    }
}

pub fn render_verify(report: &VerifyReport, format: Format) -> String {
    let t = &report.params;
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut tables = Vec::new();
            if let Some(sp) = &report.splitting {
                tables.push(csv_table(
                    &["q", "n", "k", "mode", "level", "nodes", "expected", "ok"],
                    splitting_rows(t, &sp.tower_f, &sp.tower_h),
                ));
            }
            if let Some(id) = &report.identities {
                tables.push(csv_table(
                    &["q", "n", "k", "check", "trials", "failures", "ok"],
                    check_rows(t, &id.checks),
                ));
            }
            if let Some(sh) = &report.shifting {
                tables.push(csv_table(
                    &["q", "n", "k", "z_index", "check", "pass"],
                    sh.rows.iter().map(|r| {
                        vec![
                            t.q().to_string(),
                            t.n().to_string(),
                            t.k().to_string(),
                            r.z_index.to_string(),
                            r.check.clone(),
                            r.pass.to_string(),
                        ]
                    }),
                ));
            }
            tables.join("\n")
        }
        Format::Pretty => {
            let c = &report.config;
            let mut s = String::new();
            let _ = writeln!(
                s,
                "verify {t} suite={} seed={} depth={} trials={} ext_cap={}",
                report.suite.as_str(),
                c.seed,
                c.depth,
                c.trials,
                c.ext_cap
            );
            if let Some(sp) = &report.splitting {
                let _ = writeln!(s, "[splitting]");
                pretty_splitting(&mut s, &sp.tower_f);
                pretty_splitting(&mut s, &sp.tower_h);
                let _ = writeln!(s, "  towerF/towerH agreement  {}", pass_fail(sp.mode_agreement));
            }
            if let Some(id) = &report.identities {
                let _ = writeln!(s, "[identities] sampling field {}", id.sample_field);
                pretty_checks(&mut s, &id.checks);
            }
            if let Some(sh) = &report.shifting {
                let _ = writeln!(
                    s,
                    "[shifting] sampling field {}: {} pairs from {} u-samples ({} pole skips), {} z-samples",
                    sh.sample_field, sh.pairs, sh.u_samples, sh.pole_skips, sh.z_samples
                );
                pretty_checks(&mut s, &sh.checks);
            }
            let _ = writeln!(s, "result: {}", pass_fail(report.passed));
            s
        }
    }
}
