//! Exact formulas: λ lower bound, genus-bound coefficient, ramification
//! profiles and different/ramification ratios.

use std::fmt;

use num_rational::Ratio;
use num_traits::One;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ff::prime_power;
use crate::tower::{admissible_ks, params_from, TowerError, TowerParams};

pub type Rational = Ratio<i128>;

/// Largest ℓ accepted by [`lambda_table`].
pub const LAMBDA_TABLE_MAX: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("level must be at least 2 (got {0})")]
    BadLevel(usize),
    #[error("no admissible k for n = {0}")]
    NoAdmissibleK(usize),
    #[error("l_max must be at most {LAMBDA_TABLE_MAX} (got {0})")]
    TableTooLarge(u64),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Serializes a rational as `"num/den"` (or `"num"` when integral).
pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

fn q_pow(q: u64, j: usize) -> i128 {
    (q as i128).pow(j as u32)
}

/// `x` as a decimal with six digits.
pub fn decimal(r: &Rational) -> String {
    format!("{:.6}", to_f64(r))
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaReport {
    pub params: TowerParams,
    #[serde(serialize_with = "ser_rational")]
    pub lambda_bound: Rational,
    /// `√ℓ − 1`.
    pub dv_bound: f64,
    pub ratio: f64,
    /// This `k` maximizes the bound among admissible `k` for `(q, n)`.
    pub best_k_flag: bool,
    /// The bound equals `√ℓ − 1` exactly.
    pub dv_optimal: bool,
}

/// `2 / (1/(q^k − 1) + 1/(q^{n−k} − 1))`.
pub fn lambda_bound(params: &TowerParams) -> Rational {
    let a = q_pow(params.q(), params.k()) - 1;
    let b = q_pow(params.q(), params.n() - params.k()) - 1;
    Rational::new(2 * a * b, a + b)
}

/// `(1/2)(1/(q^k − 1) + 1/(q^{n−k} − 1))`.
pub fn genus_bound_coeff(params: &TowerParams) -> Rational {
    let a = q_pow(params.q(), params.k()) - 1;
    let b = q_pow(params.q(), params.n() - params.k()) - 1;
    (Rational::new(1, a) + Rational::new(1, b)) / 2
}

fn exact_sqrt(v: u64) -> Option<u64> {
    let r = (v as f64).sqrt().round() as u64;
    (r.checked_mul(r) == Some(v)).then_some(r)
}

fn lambda_report(params: TowerParams, best_k: usize) -> LambdaReport {
    let lambda = lambda_bound(&params);
    let dv_bound = (params.ell() as f64).sqrt() - 1.0;
    let dv_optimal = exact_sqrt(params.ell()).is_some_and(|s| lambda == Rational::from_integer(s as i128 - 1));
    LambdaReport {
        params,
        lambda_bound: lambda,
        dv_bound,
        ratio: to_f64(&lambda) / dv_bound,
        best_k_flag: params.k() == best_k,
        dv_optimal,
    }
}

/// The admissible `k` with the largest bound; ties go to the smaller `k`.
pub fn best_k(q: u64, n: usize) -> Result<(usize, LambdaReport), BoundsError> {
    let mut best: Option<(usize, Rational)> = None;
    for k in admissible_ks(n) {
        let lam = lambda_bound(&params_from(q, n, k)?);
        if best.as_ref().is_none_or(|(_, b)| lam > *b) {
            best = Some((k, lam));
        }
    }
    let (k, _) = best.ok_or(BoundsError::NoAdmissibleK(n))?;
    Ok((k, lambda_report(params_from(q, n, k)?, k)))
}

/// λ report for the given parameters, with the best-k flag filled in.
pub fn lambda_report_for(params: &TowerParams) -> Result<LambdaReport, BoundsError> {
    let (k, _) = best_k(params.q(), params.n())?;
    Ok(lambda_report(*params, k))
}

/// Lower bounds for the ramification indices at level `i`, in the form
/// `tame · q^{exponent} · p^ε` with `ε ≥ 0` unknown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    pub level: usize,
    pub tame0: u64,
    pub wild0_exponent: i64,
    #[serde(serialize_with = "ser_rational")]
    pub wild0_value: Rational,
    pub tame_inf: u64,
    pub wild_inf_exponent: i64,
    #[serde(serialize_with = "ser_rational")]
    pub wild_inf_value: Rational,
    /// `ε₁(i)`, `ε₂(i)` are unknown non-negative integers.
    pub epsilon_unknown: [bool; 2],
    pub warning: Option<String>,
}

fn q_power_signed(q: u64, exp: i64) -> Rational {
    let base = Rational::from_integer(q as i128);
    if exp >= 0 {
        base.pow(exp as i32)
    } else {
        Rational::one() / base.pow((-exp) as i32)
    }
}

pub fn ram_profile(params: &TowerParams, i: usize) -> Result<RamificationProfile, BoundsError> {
    if i < 2 {
        return Err(BoundsError::BadLevel(i));
    }
    let (q, n, k) = (params.q(), params.n() as i64, params.k() as i64);
    let wild_inf = (i as i64 - 1) * (n - k);
    let wild0 = wild_inf - k;
    let warning = (wild0 < 0).then(|| format!("exponent (i−1)(n−k)−k = {wild0} is negative at level {i}"));
    Ok(RamificationProfile {
        level: i,
        tame0: q.pow(k as u32) - 1,
        wild0_exponent: wild0,
        wild0_value: q_power_signed(q, wild0),
        tame_inf: q.pow((n - k) as u32) - 1,
        wild_inf_exponent: wild_inf,
        wild_inf_value: q_power_signed(q, wild_inf),
        epsilon_unknown: [true, true],
        warning,
    })
}

impl RamificationProfile {
    /// Ramification index at P0 with the unknown `p^ε₁` factor written out.
    pub fn e0_symbolic(&self) -> String {
        format!("{}·{}·p^ε₁", self.tame0, self.wild0_value)
    }

    pub fn e_inf_symbolic(&self) -> String {
        format!("{}·{}·p^ε₂", self.tame_inf, self.wild_inf_value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeRatios {
    pub e_sub: u64,
    #[serde(serialize_with = "ser_rational")]
    pub p0: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub cap0: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub p_inf: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub cap_inf: Rational,
}

impl DeRatios {
    pub fn below_caps(&self) -> bool {
        self.p0 < self.cap0 && self.p_inf < self.cap_inf
    }
}

fn de_ratio(qk: i128, e_sub: u64) -> Rational {
    let e = e_sub as i128;
    Rational::new(qk * e - 2, (qk - 1) * e)
}

/// `d/e` at P0 is `(q^k·e − 2)/((q^k − 1)·e)`, capped by `1 + 1/(q^k − 1)`;
/// P∞ is the same with `n − k` in place of `k`.
pub fn de_ratio_bounds(params: &TowerParams, e_sub: u64) -> DeRatios {
    assert!(e_sub >= 1, "auxiliary index must be positive");
    let qk = q_pow(params.q(), params.k());
    let qnk = q_pow(params.q(), params.n() - params.k());
    DeRatios {
        e_sub,
        p0: de_ratio(qk, e_sub),
        cap0: Rational::one() + Rational::new(1, qk - 1),
        p_inf: de_ratio(qnk, e_sub),
        cap_inf: Rational::one() + Rational::new(1, qnk - 1),
    }
}

/// `d = 2(e − 1)`.
pub fn two_bounded_different(e: u64) -> u64 {
    assert!(e >= 1, "ramification index must be positive");
    2 * (e - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaRow {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub a: u64,
    pub b: u64,
    pub lambda_num: i128,
    pub lambda_den: i128,
    pub dv_bound: f64,
    pub ratio: f64,
    pub best_k: usize,
}

impl LambdaRow {
    pub fn ell(&self) -> u64 {
        self.q.pow(self.n as u32)
    }

    pub fn lambda(&self) -> Rational {
        Rational::new(self.lambda_num, self.lambda_den)
    }
}

/// One row per `(q, n)` with `n ≥ 2` and `q^n ≤ l_max` (every admissible `k`
/// when `all_k`), sorted by ℓ, then q, then k.
pub fn lambda_table(l_max: u64, all_k: bool) -> Result<Vec<LambdaRow>, BoundsError> {
    if l_max > LAMBDA_TABLE_MAX {
        return Err(BoundsError::TableTooLarge(l_max));
    }
    let mut rows = Vec::new();
    for q in 2..=l_max {
        if prime_power(q).is_none() || q.saturating_mul(q) > l_max {
            continue;
        }
        let mut n = 2;
        while q.checked_pow(n as u32).is_some_and(|l| l <= l_max) {
            let (best, _) = best_k(q, n)?;
            let ks = if all_k { admissible_ks(n) } else { vec![best] };
            for k in ks {
                let r = lambda_report(params_from(q, n, k)?, best);
                rows.push(LambdaRow {
                    q,
                    n,
                    k,
                    a: r.params.a(),
                    b: r.params.b(),
                    lambda_num: *r.lambda_bound.numer(),
                    lambda_den: *r.lambda_bound.denom(),
                    dv_bound: r.dv_bound,
                    ratio: r.ratio,
                    best_k: best,
                });
            }
            n += 1;
        }
    }
    rows.sort_by_key(|r| (r.ell(), r.q, r.k));
    Ok(rows)
}

impl fmt::Display for RamificationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level {}: e(P0) ≥ {}, e(P∞) ≥ {}",
            self.level,
            self.e0_symbolic(),
            self.e_inf_symbolic()
        )?;
        if let Some(w) = &self.warning {
            write!(f, " [warning: {w}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(q: u64, n: usize, k: usize) -> TowerParams {
        params_from(q, n, k).unwrap()
    }

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_bound(&pr(3, 2, 1)), r(2, 1));
        assert_eq!(lambda_bound(&pr(2, 3, 1)), r(3, 2));
        assert_eq!(lambda_bound(&pr(2, 5, 2)), r(21, 5));
        assert_eq!(lambda_bound(&pr(2, 2, 1)), r(1, 1));
        assert_eq!(lambda_bound(&pr(3, 4, 1)), r(26, 7));
    }

    #[test]
    fn lambda_symmetry_and_dv() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for n in 2..=6 {
                for k in admissible_ks(n) {
                    let t = pr(q, n, k);
                    assert_eq!(lambda_bound(&t), lambda_bound(&pr(q, n, n - k)));
                    assert_eq!(lambda_bound(&t) * genus_bound_coeff(&t), Rational::one());
                    let rep = lambda_report_for(&t).unwrap();
                    assert!(to_f64(&rep.lambda_bound) <= rep.dv_bound + 1e-9);
                }
            }
            let t = pr(q, 2, 1);
            assert_eq!(lambda_bound(&t), Rational::from_integer(q as i128 - 1));
            assert!(lambda_report_for(&t).unwrap().dv_optimal);
        }
        assert!(!lambda_report_for(&pr(2, 3, 1)).unwrap().dv_optimal);
    }

    #[test]
    fn best_k_examples() {
        assert_eq!(best_k(2, 2).unwrap().0, 1);
        assert_eq!(best_k(2, 5).unwrap().0, 2);
        assert_eq!(best_k(2, 5).unwrap().1.lambda_bound, r(21, 5));
        assert_eq!(best_k(3, 4).unwrap().0, 1);
        assert_eq!(best_k(2, 3).unwrap().0, 1);
    }

    #[test]
    fn genus_coeff_values() {
        assert_eq!(genus_bound_coeff(&pr(3, 2, 1)), r(1, 2));
        assert_eq!(genus_bound_coeff(&pr(2, 3, 1)), r(2, 3));
    }

    #[test]
    fn ramification_231() {
        let p = ram_profile(&pr(2, 3, 1), 2).unwrap();
        assert_eq!((p.tame_inf, p.wild_inf_exponent), (3, 2));
        assert_eq!(p.wild_inf_value, r(4, 1));
        assert_eq!((p.tame0, p.wild0_exponent), (1, 1));
        assert_eq!(p.wild0_value, r(2, 1));
        assert_eq!(p.epsilon_unknown, [true, true]);
        assert!(p.warning.is_none());
        assert_eq!(p.e_inf_symbolic(), "3·4·p^ε₂");
        assert_eq!(ram_profile(&pr(2, 3, 1), 1).unwrap_err(), BoundsError::BadLevel(1));
    }

    #[test]
    fn negative_wild_exponent_warns() {
        // (2,3,2) at level 2: (n−k) − k = −1
        let p = ram_profile(&pr(2, 3, 2), 2).unwrap();
        assert_eq!(p.wild0_exponent, -1);
        assert_eq!(p.wild0_value, r(1, 2));
        assert!(p.warning.is_some());
        assert!(ram_profile(&pr(2, 3, 2), 3).unwrap().warning.is_none());
    }

    #[test]
    fn tame_parts_prime_to_p() {
        for (q, n, k) in [(2, 3, 1), (3, 5, 2), (4, 5, 3), (9, 2, 1), (2, 2, 1), (3, 4, 1)] {
            let t = pr(q, n, k);
            let p = ram_profile(&t, 4).unwrap();
            // q^j − 1 divides q^n − 1 exactly when j divides n
            assert_eq!((t.ell() - 1).is_multiple_of(p.tame0), n % k == 0);
            assert_eq!((t.ell() - 1).is_multiple_of(p.tame_inf), n % (n - k) == 0);
            assert_ne!(p.tame0 % t.p(), 0);
            assert_ne!(p.tame_inf % t.p(), 0);
        }
    }

    #[test]
    fn de_ratio_examples() {
        let t = pr(2, 3, 1);
        assert_eq!(de_ratio_bounds(&t, 1).p0, r(0, 1));
        let d4 = de_ratio_bounds(&t, 4);
        assert_eq!(d4.p_inf, r(14, 12));
        assert_eq!(d4.cap_inf, r(4, 3));
        let mut prev = de_ratio_bounds(&t, 1);
        for e in 2..=1000 {
            let d = de_ratio_bounds(&t, e);
            assert!(d.below_caps());
            assert!(d.p0 > prev.p0 && d.p_inf > prev.p_inf);
            prev = d;
        }
    }

    #[test]
    fn different_exponent() {
        assert_eq!(two_bounded_different(1), 0);
        assert_eq!(two_bounded_different(4), 6);
    }

    #[test]
    fn table_rows() {
        let rows = lambda_table(16, false).unwrap();
        let key: Vec<_> = rows.iter().map(|r| (r.ell(), r.q, r.n, r.k)).collect();
        assert_eq!(
            key,
            vec![(4, 2, 2, 1), (8, 2, 3, 1), (9, 3, 2, 1), (16, 2, 4, 1), (16, 4, 2, 1)]
        );
        assert_eq!(rows[0].lambda(), r(1, 1));
        assert_eq!(rows[1].lambda(), r(3, 2));
        assert_eq!(rows[2].lambda(), r(2, 1));
        let all = lambda_table(8, true).unwrap();
        assert_eq!(all.iter().filter(|r| r.ell() == 8).count(), 2);
        assert!(matches!(
            lambda_table(1 << 17, false),
            Err(BoundsError::TableTooLarge(_))
        ));
    }
}
