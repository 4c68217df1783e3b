//! Verification suites run by `verify`, assembled into deterministic reports.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ff::{enumerate_field, find_embedding, Field, FieldElement};
use crate::linpoly::{
    euclid_identity_check, extension_of, lin_compose, root_space, splitting_degree, trace_poly, LinPolyError,
};
use crate::shifting::{
    phi_matrix, prep_identities, prep_identities_unchecked, psi_check, shift, splitting_fields_equal, ShiftError,
};
use crate::splitting::{enumerate_chains_h, verify_splitting_f, SplittingError, SplittingReport};
use crate::tower::{
    check_rsu, compute_rsu, dual_z_step, f_i_from_u, f_poly, u_poly_for_z, z_step, Direction, TowerError, TowerParams,
    Which,
};

/// ChaCha8 stream used by the identities suite.
pub const IDENTITIES_STREAM: u64 = 1;
/// ChaCha8 stream used by the shifting suite.
pub const SHIFTING_STREAM: u64 = 2;
/// Smallest size of the field specializations are drawn from.
pub const MIN_SAMPLE_FIELD: u64 = 64;
/// z-values tested against the identities in F_ℓ by exhaustive sweep.
const COSET_Z_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub depth: usize,
    pub trials: usize,
    pub seed: u64,
    pub ext_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            depth: 3,
            trials: 200,
            seed: 0,
            ext_cap: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Splitting,
    Identities,
    Shifting,
    All,
}

impl SuiteName {
    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Splitting => "splitting",
            SuiteName::Identities => "identities",
            SuiteName::Shifting => "shifting",
            SuiteName::All => "all",
        }
    }
}

/// Aggregate of one named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    /// Samples skipped because a denominator vanished.
    pub skipped: u64,
    pub ok: bool,
    pub witness: Option<String>,
}

struct Tally {
    name: &'static str,
    trials: u64,
    failures: u64,
    skipped: u64,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            trials: 0,
            failures: 0,
            skipped: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name.to_string(),
            trials: self.trials,
            failures: self.failures,
            skipped: self.skipped,
            ok: self.failures == 0 && self.trials > 0,
            witness: self.witness,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplittingSuite {
    pub tower_f: SplittingReport,
    pub tower_h: SplittingReport,
    /// Tower F passes exactly when the depth-2 chain tree does.
    pub mode_agreement: bool,
    pub passed: bool,
}

pub fn run_splitting(params: &TowerParams, cfg: &RunConfig) -> Result<SplittingSuite, SplittingError> {
    let tower_f = verify_splitting_f(params)?;
    let tower_h = enumerate_chains_h(params, cfg.depth)?;
    let h2_passed = if cfg.depth == 2 {
        tower_h.passed()
    } else {
        enumerate_chains_h(params, 2)?.passed()
    };
    let mode_agreement = tower_f.passed() == h2_passed;
    let passed = tower_f.passed() && tower_h.passed() && mode_agreement;
    Ok(SplittingSuite {
        tower_f,
        tower_h,
        mode_agreement,
        passed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentitiesSuite {
    pub sample_field: String,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// F_{ℓ^r} with `r` minimal such that `ℓ^r ≥ 64`.
pub fn sample_field(params: &TowerParams) -> Result<Field, TowerError> {
    let mut r = 1;
    while (params.ell() as u128).pow(r as u32) < MIN_SAMPLE_FIELD as u128 {
        r += 1;
    }
    Ok(params.extension(r)?)
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn run_identities(params: &TowerParams, cfg: &RunConfig) -> Result<IdentitiesSuite, TowerError> {
    let mut rng = rng_for(cfg.seed, IDENTITIES_STREAM);
    let (n, k, q) = (params.n(), params.k(), params.q());
    let base = params.base();
    let fl = params.field()?;
    let kf = sample_field(params)?;
    let mut checks = Vec::new();

    // relations among x, y, R, S, u over every F_ℓ-solution
    let mut rsu = [
        Tally::new("rsu_trace_sum"),
        Tally::new("rsu_r_from_u"),
        Tally::new("rsu_s_from_u"),
        Tally::new("rsu_y_power"),
        Tally::new("rsu_x_power"),
        Tally::new("rsu_x_power_from_u"),
    ];
    let solutions = verify_splitting_f(params)
        .map_err(|err| match err {
            SplittingError::Tower(t) => t,
            SplittingError::Field(f) => TowerError::Field(f),
            other => TowerError::BadRange(other.to_string()),
        })?
        .solutions;
    for (x, y) in &solutions {
        let w = || format!("x={x} y={y}");
        let c = match compute_rsu(params, x, y) {
            Ok(r) => check_rsu(params, x, y, &r),
            Err(err) => {
                rsu[0].record(false, || format!("{} ({err})", w()));
                continue;
            }
        };
        rsu[0].record(c.trace_sum, w);
        rsu[1].record(c.r_from_u, w);
        rsu[2].record(c.s_from_u, w);
        for (t, v) in [(3, c.y_power), (4, c.x_power), (5, c.x_power_from_u)] {
            match v {
                Some(ok) => rsu[t].record(ok, w),
                None => rsu[t].skipped += 1,
            }
        }
    }
    checks.extend(rsu.into_iter().map(Tally::finish));

    // explicit Euclid identity for the pair (k, n−k) in both orders
    let mut euclid_formal = Tally::new("euclid_formal");
    let mut euclid_numeric = Tally::new("euclid_numeric");
    for (i, j) in [(k, n - k), (n - k, k)] {
        let v = euclid_identity_check(i, j, q, cfg.trials, &mut rng).map_err(TowerError::Lin)?;
        euclid_formal.record(v.formal && v.formal_sums, || format!("i={i} j={j}"));
        euclid_numeric.trials += v.trials as u64;
        euclid_numeric.failures += v.numeric_failures as u64;
        if v.numeric_failures > 0 && euclid_numeric.witness.is_none() {
            euclid_numeric.witness = v.witness.clone();
        }
    }
    checks.push(euclid_formal.finish());
    checks.push(euclid_numeric.finish());

    // trace polynomials over F_q: splitting and commutation, i, j ≤ n
    let fq = base.field();
    let tr = |i| trace_poly(i, base, &fq).map_err(TowerError::Lin);
    let mut split = Tally::new("trace_split");
    let mut commute = Tally::new("trace_commute");
    for i in 1..=n {
        for j in 1..=n {
            if j < i {
                let rhs = tr(i - j)?.add(&tr(j)?.q_shift(i - j))?;
                split.record(tr(i)? == rhs, || format!("i={i} j={j}"));
            }
            let ij = lin_compose(&tr(i)?, &tr(j)?)?;
            let ji = lin_compose(&tr(j)?, &tr(i)?)?;
            commute.record(ij == ji, || format!("i={i} j={j}"));
        }
    }
    checks.push(split.finish());
    checks.push(commute.finish());

    // z-steps, u-polynomials, f_i and the dual recursion at random u
    let mut left_root = Tally::new("left_step_root");
    let mut fi_same = Tally::new("f_i_same_matches_f");
    let mut fi_next = Tally::new("f_i_next_matches_f");
    let mut dual = Tally::new("dual_step_reciprocal");
    for _ in 0..cfg.trials {
        let u = kf.random(&mut rng);
        let w = || format!("u={u}");
        let left = z_step(params, &u, Direction::Left);
        let right = z_step(params, &u, Direction::Right);
        match &left {
            Ok(z) if !z.is_zero() => {
                left_root.record(u_poly_for_z(params, z)?.eval(&u)?.is_zero(), w);
                match f_i_from_u(params, &u, Which::Same) {
                    Ok(fi) => fi_same.record(fi == f_poly(params, z)?, w),
                    Err(_) => fi_same.skipped += 1,
                }
            }
            _ => {
                left_root.skipped += 1;
                fi_same.skipped += 1;
            }
        }
        match &right {
            Ok(z) if !z.is_zero() => match f_i_from_u(params, &u, Which::Next) {
                Ok(fi) => fi_next.record(fi == f_poly(params, z)?, w),
                Err(_) => fi_next.skipped += 1,
            },
            _ => fi_next.skipped += 1,
        }
        let pairs = [
            (dual_z_step(params, &u, Direction::Left), &right),
            (dual_z_step(params, &u, Direction::Right), &left),
        ];
        for (d, other) in pairs {
            match (d, other) {
                (Ok(d), Ok(o)) => dual.record((&d * o).is_one(), w),
                _ => dual.skipped += 1,
            }
        }
    }
    checks.extend([left_root, fi_same, fi_next, dual].map(Tally::finish));

    // u-roots in F_ℓ form a coset of the f-roots (exhaustive sweep)
    let all = enumerate_field(&fl)?;
    let mut coset = Tally::new("u_roots_coset");
    for z in all.iter().skip(1).take(COSET_Z_LIMIT) {
        let up = u_poly_for_z(params, z)?;
        let mut swept = Vec::new();
        for u in &all {
            if up.eval(u)?.is_zero() {
                swept.push(u.clone());
            }
        }
        let ok = match swept.first() {
            None => true,
            Some(u0) => {
                let v = root_space(&f_poly(params, z)?, &fl)?;
                let mut shifted: Vec<_> = v.elements().iter().map(|s| u0 + s).collect();
                shifted.sort();
                shifted == swept
            }
        };
        coset.record(ok, || format!("z={z}"));
    }
    checks.push(coset.finish());

    // additivity and F_q-homogeneity of evaluation
    let omega = find_embedding(&fq, &kf)?.generator_image().clone();
    let mut additive = Tally::new("eval_additive");
    let mut homogeneous = Tally::new("eval_fq_homogeneous");
    for _ in 0..cfg.trials {
        let z = kf.random_nonzero(&mut rng);
        let h = f_poly(params, &z)?;
        let a = kf.random(&mut rng);
        let b = kf.random(&mut rng);
        let lambda = omega.pow(rand::RngCore::next_u64(&mut rng) % q);
        let w = || format!("z={z} a={a} b={b}");
        additive.record(h.eval(&(&a + &b))? == &h.eval(&a)? + &h.eval(&b)?, w);
        homogeneous.record(h.eval(&(&lambda * &a))? == &lambda * &h.eval(&a)?, w);
    }
    checks.push(additive.finish());
    checks.push(homogeneous.finish());

    let passed = checks.iter().all(|c| c.ok);
    Ok(IdentitiesSuite {
        sample_field: kf.to_string(),
        checks,
        passed,
    })
}

/// One check on one specialization, for CSV output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleRow {
    pub z_index: usize,
    pub check: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftingSuite {
    pub sample_field: String,
    /// `u` samples with a full root space harvested.
    pub u_samples: usize,
    /// `u` samples skipped for a vanishing denominator.
    pub pole_skips: usize,
    /// `(u, s)` pairs checked.
    pub pairs: usize,
    pub z_samples: usize,
    pub checks: Vec<CheckResult>,
    pub rows: Vec<SampleRow>,
    pub passed: bool,
}

struct RowLog {
    rows: Vec<SampleRow>,
    tallies: Vec<Tally>,
}

impl RowLog {
    fn new(names: &[&'static str]) -> Self {
        RowLog {
            rows: Vec::new(),
            tallies: names.iter().map(|n| Tally::new(n)).collect(),
        }
    }

    fn tally(&mut self, name: &str) -> &mut Tally {
        self.tallies
            .iter_mut()
            .find(|t| t.name == name)
            .expect("registered check name")
    }

    /// Records a per-sample verdict; `inner` counts the underlying trials.
    fn record(
        &mut self,
        index: usize,
        name: &'static str,
        trials: u64,
        failures: u64,
        witness: impl FnOnce() -> String,
    ) {
        let t = self.tally(name);
        t.trials += trials;
        t.failures += failures;
        if failures > 0 && t.witness.is_none() {
            t.witness = Some(witness());
        }
        self.rows.push(SampleRow {
            z_index: index,
            check: name.to_string(),
            pass: failures == 0,
        });
    }
}

const U_CHECKS: [&str; 7] = [
    "prep_ratio_relation",
    "prep_trace_relation",
    "shift_is_next_root",
    "negative_control",
    "root_space_dims",
    "phi_fq_linear",
    "phi_bijective",
];
const Z_CHECKS: [&str; 5] = [
    "splitting_degree_f_eq_g",
    "splitting_degree_adjoint",
    "root_spaces_cross_contained",
    "psi_images",
    "psi_bijective",
];

/// An element of `field` that is not a root of `f_i`.
fn outside_root_space(params: &TowerParams, u: &FieldElement) -> Result<FieldElement, ShiftError> {
    let fi = f_i_from_u(params, u, Which::Same)?;
    let field = u.field();
    for i in 0..field.degree() {
        let mut unit = vec![0; field.degree()];
        unit[i] = 1;
        let d = field.from_coeffs(&unit)?;
        if !fi.eval(&d)?.is_zero() {
            return Ok(d);
        }
    }
    unreachable!("a proper subspace misses some basis vector")
}

pub fn run_shifting(params: &TowerParams, cfg: &RunConfig) -> Result<ShiftingSuite, ShiftError> {
    let mut rng = rng_for(cfg.seed, SHIFTING_STREAM);
    let kf = sample_field(params)?;
    let n = params.n();
    let mut names: Vec<&'static str> = U_CHECKS.to_vec();
    names.extend(Z_CHECKS);
    names.extend(["harvest_within_cap", "z_splitting_within_cap"]);
    let mut log = RowLog::new(&names);

    // harvest (u, s) pairs until enough are checked
    let mut u_samples = 0;
    let mut pole_skips = 0;
    let mut pairs = 0;
    let max_attempts = 20 * cfg.trials.max(1);
    let mut attempts = 0;
    while pairs < cfg.trials && attempts < max_attempts {
        attempts += 1;
        let u0 = kf.random(&mut rng);
        let (Ok(fi), Ok(_)) = (
            f_i_from_u(params, &u0, Which::Same),
            f_i_from_u(params, &u0, Which::Next),
        ) else {
            pole_skips += 1;
            continue;
        };
        if shift(params, &u0, &kf.zero()).is_err() {
            pole_skips += 1;
            continue;
        }
        let idx = u_samples;
        u_samples += 1;
        let degree = match splitting_degree(&fi, cfg.ext_cap) {
            Ok(d) => d,
            Err(LinPolyError::CapExceeded { .. }) => {
                log.record(idx, "harvest_within_cap", 1, 1, || format!("u={u0}"));
                continue;
            }
            Err(err) => return Err(err.into()),
        };
        log.record(idx, "harvest_within_cap", 1, 0, String::new);
        let big = extension_of(&kf, degree)?;
        let u = find_embedding(&kf, &big)?.apply(&u0)?;
        let v = root_space(&f_i_from_u(params, &u, Which::Same)?, &big)?;
        let next = f_i_from_u(params, &u, Which::Next)?;
        let w_dim = root_space(&next, &big)?.dim();
        let dims_ok = v.dim() == n - 1 && w_dim == n - 1;
        log.record(idx, "root_space_dims", 1, (!dims_ok) as u64, || {
            format!("u={u0}: dims {} and {w_dim}", v.dim())
        });

        let roots = v.elements();
        let delta = outside_root_space(params, &u)?;
        let (mut ratio_fail, mut trace_fail, mut shift_fail, mut control_fail) = (0, 0, 0, 0);
        for s in &roots {
            let prep = prep_identities(params, &u, s)?;
            ratio_fail += (!prep.ratio_relation) as u64;
            trace_fail += (!prep.trace_relation) as u64;
            let s_next = shift(params, &u, s)?;
            shift_fail += (!next.eval(&s_next)?.is_zero()) as u64;
            let perturbed = prep_identities_unchecked(params, &u, &(s + &delta))?;
            control_fail += perturbed.passed() as u64;
        }
        let count = roots.len() as u64;
        let w = || format!("u={u0}");
        log.record(idx, "prep_ratio_relation", count, ratio_fail, w);
        log.record(idx, "prep_trace_relation", count, trace_fail, w);
        log.record(idx, "shift_is_next_root", count, shift_fail, w);
        log.record(idx, "negative_control", count, control_fail, w);
        pairs += roots.len();

        match phi_matrix(params, &u, &v) {
            Ok(phi) => {
                log.record(idx, "phi_fq_linear", 1, (!phi.fq_linear) as u64, w);
                log.record(idx, "phi_bijective", 1, (!phi.bijective()) as u64, w);
            }
            Err(ShiftError::SplittingTooSmall { .. }) => {
                log.record(idx, "phi_fq_linear", 1, 1, w);
                log.record(idx, "phi_bijective", 1, 1, w);
            }
            Err(err) => return Err(err),
        }
    }

    // specializations z: splitting fields of f, g and the trace map
    let z_samples = cfg.trials.div_ceil(4).max(1);
    for idx in 0..z_samples {
        let z = kf.random_nonzero(&mut rng);
        let w = || format!("z={z}");
        let eq = match splitting_fields_equal(params, &z, cfg.ext_cap) {
            Ok(eq) => eq,
            Err(ShiftError::Lin(LinPolyError::CapExceeded { .. })) => {
                log.record(idx, "z_splitting_within_cap", 1, 1, w);
                continue;
            }
            Err(err) => return Err(err),
        };
        log.record(idx, "z_splitting_within_cap", 1, 0, w);
        log.record(
            idx,
            "splitting_degree_f_eq_g",
            1,
            (eq.degree_f != eq.degree_g) as u64,
            w,
        );
        log.record(
            idx,
            "splitting_degree_adjoint",
            1,
            (eq.degree_f != eq.degree_zf_adjoint) as u64,
            w,
        );
        let cross = eq.f_splits_in_g_field && eq.g_splits_in_f_field;
        log.record(idx, "root_spaces_cross_contained", 1, (!cross) as u64, w);
        let big = extension_of(&kf, eq.degree_g)?;
        let z_big = find_embedding(&kf, &big)?.apply(&z)?;
        match psi_check(params, &z_big, &big) {
            Ok(psi) => {
                log.record(idx, "psi_images", 1, (!psi.images_are_roots) as u64, w);
                log.record(idx, "psi_bijective", 1, (!psi.bijective()) as u64, w);
            }
            Err(ShiftError::SplittingTooSmall { .. }) => {
                log.record(idx, "psi_images", 1, 1, w);
                log.record(idx, "psi_bijective", 1, 1, w);
            }
            Err(err) => return Err(err),
        }
    }

    let checks: Vec<CheckResult> = log
        .tallies
        .into_iter()
        .map(|mut t| {
            if t.name == "prep_ratio_relation" {
                t.skipped = pole_skips as u64;
            }
            t.finish()
        })
        .collect();
    let passed = checks.iter().all(|c| c.ok) && pairs >= cfg.trials;
    Ok(ShiftingSuite {
        sample_field: kf.to_string(),
        u_samples,
        pole_skips,
        pairs,
        z_samples,
        checks,
        rows: log.rows,
        passed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub params: TowerParams,
    pub suite: SuiteName,
    pub config: RunConfig,
    pub splitting: Option<SplittingSuite>,
    pub identities: Option<IdentitiesSuite>,
    pub shifting: Option<ShiftingSuite>,
    pub passed: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Splitting(#[from] SplittingError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

pub fn run_verify(params: &TowerParams, suite: SuiteName, cfg: &RunConfig) -> Result<VerifyReport, SuiteError> {
    let wants = |s: SuiteName| suite == s || suite == SuiteName::All;
    let splitting = wants(SuiteName::Splitting)
        .then(|| run_splitting(params, cfg))
        .transpose()?;
    let identities = wants(SuiteName::Identities)
        .then(|| run_identities(params, cfg))
        .transpose()?;
    let shifting = wants(SuiteName::Shifting)
        .then(|| run_shifting(params, cfg))
        .transpose()?;
    let passed = splitting.as_ref().is_none_or(|s| s.passed)
        && identities.as_ref().is_none_or(|s| s.passed)
        && shifting.as_ref().is_none_or(|s| s.passed);
    Ok(VerifyReport {
        params: *params,
        suite,
        config: *cfg,
        splitting,
        identities,
        shifting,
        passed,
    })
}
