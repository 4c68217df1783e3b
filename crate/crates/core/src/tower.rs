//! Tower parameters and the defining relations of the towers F, H and their
//! duals, evaluated at finite-field values.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::ff::{make_field, prime_power, FfError, Field, FieldElement};
use crate::linalg::FpMatrix;
use crate::linpoly::{root_space, trace_poly, LinPolyError, LinearizedPoly, QBase};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0}")]
    BadRange(String),
    #[error("gcd(k, n−k) must be 1")]
    GcdNotOne,
    #[error("a ≡ 0 (mod p) needs gcd(n−k, p) = 1")]
    NormalizationUnavailable,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("(x, y) does not satisfy the defining equation")]
    NotOnCurve,
    #[error("z must be nonzero")]
    DegenerateZ,
    #[error("denominator vanishes")]
    PoleHit,
    #[error(transparent)]
    Lin(#[from] LinPolyError),
    #[error(transparent)]
    Field(#[from] FfError),
}

/// How `(a, b)` with `a·k − b·(n−k) = 1` is chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Smallest `a ≥ 1`.
    #[default]
    MinimalA,
    /// Smallest `a ≥ 1` with `a ≡ 0 (mod p)`; needs `p ∤ n−k`.
    ZeroModP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TowerParams {
    p: u64,
    e: u32,
    q: u64,
    n: usize,
    k: usize,
    ell: u64,
    a: u64,
    b: u64,
}

impl fmt::Display for TowerParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(q={}, n={}, k={}, a={}, b={})",
            self.q, self.n, self.k, self.a, self.b
        )
    }
}

pub fn params_from(q: u64, n: usize, k: usize) -> Result<TowerParams, TowerError> {
    params_with(q, n, k, Normalization::MinimalA)
}

pub fn params_with(q: u64, n: usize, k: usize, norm: Normalization) -> Result<TowerParams, TowerError> {
    let (p, e) = prime_power(q).ok_or(TowerError::NotPrimePower(q))?;
    if p >= 1 << 16 {
        return Err(TowerError::BadRange(format!("characteristic {p} is too large")));
    }
    if n < 2 {
        return Err(TowerError::BadRange("n must be at least 2".into()));
    }
    if k < 1 || k >= n {
        return Err(TowerError::BadRange("k must satisfy 1 ≤ k < n".into()));
    }
    if k.gcd(&(n - k)) != 1 {
        return Err(TowerError::GcdNotOne);
    }
    let ell = u32::try_from(n)
        .ok()
        .and_then(|n| q.checked_pow(n))
        .ok_or_else(|| TowerError::BadRange(format!("{q}^{n} overflows")))?;
    let m = (n - k) as u64;
    let step = match norm {
        Normalization::MinimalA => 1,
        Normalization::ZeroModP if m.is_multiple_of(p) => return Err(TowerError::NormalizationUnavailable),
        Normalization::ZeroModP => p,
    };
    let a = (1..)
        .map(|t| t * step)
        .find(|&a| (a * k as u64) % m == 1 % m)
        .expect("k is invertible mod n−k");
    let b = (a * k as u64 - 1) / m;
    Ok(TowerParams {
        p,
        e,
        q,
        n,
        k,
        ell,
        a,
        b,
    })
}

/// Admissible `k` for a given `n`: `1 ≤ k < n`, `gcd(k, n−k) = 1`.
pub fn admissible_ks(n: usize) -> Vec<usize> {
    (1..n).filter(|k| k.gcd(&(n - k)) == 1).collect()
}

impl TowerParams {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn base(&self) -> QBase {
        QBase::new(self.q).expect("validated at construction")
    }

    /// The constant field F_ℓ.
    pub fn field(&self) -> Result<Field, FfError> {
        make_field(self.p, self.e as usize * self.n)
    }

    /// F_{ℓ^r}.
    pub fn extension(&self, r: usize) -> Result<Field, FfError> {
        make_field(self.p, self.e as usize * self.n * r)
    }

    fn raw(&self) -> Raw {
        Raw {
            e: self.e,
            n: self.n,
            k: self.k,
            a: self.a,
            b: self.b,
        }
    }
}

/// Parameters of the tower for `(q, n, n−k)`, normalized as usual.
///
/// Swapping `k ↔ n−k` and `a ↔ b` literally gives `a'k' − b'(n−k') = −1`;
/// that raw form drives [`dual_z_step`].
pub fn dual_params(params: &TowerParams) -> TowerParams {
    params_from(params.q, params.n, params.n - params.k).expect("k ↔ n−k preserves admissibility")
}

/// `(k, a, b)` as plain numbers, so the literal `k ↔ n−k, a ↔ b` swap can
/// be expressed even though it breaks the `= 1` normalization.
#[derive(Clone, Copy)]
struct Raw {
    e: u32,
    n: usize,
    k: usize,
    a: u64,
    b: u64,
}

impl Raw {
    fn swapped(self) -> Raw {
        Raw {
            k: self.n - self.k,
            a: self.b,
            b: self.a,
            ..self
        }
    }
}

/// `Tr_i(x) = x + x^q + ... + x^{q^{i-1}}` for `q = p^e`.
pub fn trace_value(x: &FieldElement, e: u32, i: usize) -> FieldElement {
    let mut acc = x.field().zero();
    let mut cur = x.clone();
    for j in 0..i {
        if j > 0 {
            cur = cur.q_power(e, 1);
        }
        acc += &cur;
    }
    acc
}

fn int(field: &Field, v: u64) -> FieldElement {
    field.from_int((v % field.characteristic() as u64) as i64)
}

/// Additive part of the defining equation of F in `y`: `Σ_j c_j y^{q^j}` with
/// `c_j = x^{-q^{k+j}}` for `j < n−k` and `c_j = x^{-q^{j-(n-k)}}` otherwise.
pub fn fiber_linpoly_f(params: &TowerParams, x: &FieldElement) -> Result<LinearizedPoly, TowerError> {
    let inv = x.inv().map_err(|_| TowerError::ZeroArgument)?;
    let (n, k, e) = (params.n, params.k, params.e);
    let coeffs = (0..n)
        .map(|j| {
            let t = if j < n - k { k + j } else { j - (n - k) };
            inv.q_power(e, t as u64)
        })
        .collect();
    Ok(LinearizedPoly::new(params.base(), x.field(), coeffs)?)
}

/// The defining equation of F minus 1, as an ordinary polynomial in `y` of degree `q^{n−1}`.
pub fn fiber_poly_f(params: &TowerParams, x: &FieldElement) -> Result<Poly, TowerError> {
    let lin = fiber_linpoly_f(params, x)?;
    Ok(lin.to_poly().sub(&Poly::constant(x.field().one())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rsu {
    pub r: FieldElement,
    pub s: FieldElement,
    pub u: FieldElement,
}

/// `R = y/x^{q^k}`, `S = y^{q^{n−k}}/x` and
/// `u = Σ_{α<a} R^{q^{αk}} + (Σ_{β<b} S^{q^{β(n−k)}})^q`.
pub fn compute_rsu(params: &TowerParams, x: &FieldElement, y: &FieldElement) -> Result<Rsu, TowerError> {
    if x.is_zero() {
        return Err(TowerError::ZeroArgument);
    }
    if x.field() != y.field() {
        return Err(FfError::FieldMismatch(x.field().id(), y.field().id()).into());
    }
    if !fiber_poly_f(params, x)?.eval(y).is_zero() {
        return Err(TowerError::NotOnCurve);
    }
    let (e, n, k) = (params.e, params.n, params.k);
    let r = y / &x.q_power(e, k as u64);
    let s = &y.q_power(e, (n - k) as u64) / x;
    let mut first = x.field().zero();
    for alpha in 0..params.a {
        first += &r.q_power(e, alpha * k as u64);
    }
    let mut second = x.field().zero();
    for beta in 0..params.b {
        second += &s.q_power(e, beta * (n - k) as u64);
    }
    let u = &first + &second.q_power(e, 1);
    Ok(Rsu { r, s, u })
}

/// Outcome of the relations among `x, y, R, S, u`. Relations involving a
/// division report `None` when the divisor vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RsuChecks {
    /// `Tr_{n−k}(R) + Tr_k(S) = 1`.
    pub trace_sum: bool,
    /// `R = Tr_k(u) − b`.
    pub r_from_u: bool,
    /// `S = −Tr_{n−k}(u) + a`.
    pub s_from_u: bool,
    /// `y^{q^n−1} = S^{q^k}/R`.
    pub y_power: Option<bool>,
    /// `x^{q^n−1} = S/R^{q^{n−k}}`.
    pub x_power: Option<bool>,
    /// `x^{q^n−1} = −(Tr_{n−k}(u) − a)/(Tr_k(u)^{q^{n−k}} − b)`.
    pub x_power_from_u: Option<bool>,
}

impl RsuChecks {
    pub fn all_ok(&self) -> bool {
        self.trace_sum
            && self.r_from_u
            && self.s_from_u
            && self.y_power != Some(false)
            && self.x_power != Some(false)
            && self.x_power_from_u != Some(false)
    }
}

pub fn check_rsu(params: &TowerParams, x: &FieldElement, y: &FieldElement, rsu: &Rsu) -> RsuChecks {
    let (e, n, k) = (params.e, params.n, params.k);
    let field = x.field();
    let a = int(field, params.a);
    let b = int(field, params.b);
    let tk_u = trace_value(&rsu.u, e, k);
    let tnk_u = trace_value(&rsu.u, e, n - k);
    let x_pow = x.pow(params.ell - 1);
    let y_pow = y.pow(params.ell - 1);
    let ratio =
        |num: FieldElement, den: FieldElement, expect: &FieldElement| (!den.is_zero()).then(|| &num / &den == *expect);
    RsuChecks {
        trace_sum: (&trace_value(&rsu.r, e, n - k) + &trace_value(&rsu.s, e, k)).is_one(),
        r_from_u: rsu.r == &tk_u - &b,
        s_from_u: rsu.s == &a - &tnk_u,
        y_power: ratio(rsu.s.q_power(e, k as u64), rsu.r.clone(), &y_pow),
        x_power: ratio(rsu.s.clone(), rsu.r.q_power(e, (n - k) as u64), &x_pow),
        x_power_from_u: ratio(-&(&tnk_u - &a), &tk_u.q_power(e, (n - k) as u64) - &b, &x_pow),
    }
}

/// `L(T) + c` with `L` q-additive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLinPoly {
    pub linear: LinearizedPoly,
    pub constant: FieldElement,
}

impl AffineLinPoly {
    pub fn eval(&self, t: &FieldElement) -> Result<FieldElement, TowerError> {
        Ok(&self.linear.eval(t)? + &self.constant)
    }

    pub fn to_poly(&self) -> Poly {
        self.linear.to_poly().add(&Poly::constant(self.constant.clone()))
    }

    /// All roots in `field`: one solution of `L(T) = −c` plus the root space
    /// of `L`. Sorted in enumeration order.
    pub fn roots_in(&self, field: &Field) -> Result<Vec<FieldElement>, TowerError> {
        let space = root_space(&self.linear, field)?;
        let lin = space.poly();
        let target = -&crate::ff::find_embedding(self.constant.field(), field)?.apply(&self.constant)?;
        let m = field.degree();
        let columns: Vec<Vec<u32>> = (0..m)
            .map(|i| {
                let mut unit = vec![0; m];
                unit[i] = 1;
                let x = field.from_coeffs(&unit).expect("length m");
                lin.eval(&x).expect("same field").coeffs().to_vec()
            })
            .collect();
        let matrix = FpMatrix::from_columns(field.characteristic(), m, &columns);
        let Some(sol) = matrix.solve(target.coeffs()) else {
            return Ok(Vec::new());
        };
        let base = field.from_coeffs(&sol)?;
        let mut roots: Vec<_> = space.elements().iter().map(|v| &base + v).collect();
        roots.sort();
        Ok(roots)
    }
}

/// `Tr_{n−k}(T) − z·Tr_k(T)^{q^{n−k}} − a + z·b`, whose roots are the `u`
/// lying over `z`.
pub fn u_poly_for_z(params: &TowerParams, z: &FieldElement) -> Result<AffineLinPoly, TowerError> {
    if z.is_zero() {
        return Err(TowerError::DegenerateZ);
    }
    let host = z.field();
    let q = params.base();
    let (n, k) = (params.n, params.k);
    let linear = trace_poly(n - k, q, host)?.sub(&trace_poly(k, q, host)?.q_shift(n - k).scale(z)?)?;
    let constant = &(z * &int(host, params.b)) - &int(host, params.a);
    Ok(AffineLinPoly { linear, constant })
}

/// `f(T) = −z^{-1} Tr_{n−k}(T) + Tr_k(T)^{q^{n−k}}`.
pub fn f_poly(params: &TowerParams, z: &FieldElement) -> Result<LinearizedPoly, TowerError> {
    let zinv = z.inv().map_err(|_| TowerError::DegenerateZ)?;
    let host = z.field();
    let q = params.base();
    let (n, k) = (params.n, params.k);
    Ok(trace_poly(k, q, host)?
        .q_shift(n - k)
        .sub(&trace_poly(n - k, q, host)?.scale(&zinv)?)?)
}

/// `g(T) = Tr_{n−k}(T)^{q^k} − z·Tr_k(T)`.
pub fn g_poly(params: &TowerParams, z: &FieldElement) -> Result<LinearizedPoly, TowerError> {
    if z.is_zero() {
        return Err(TowerError::DegenerateZ);
    }
    let host = z.field();
    let q = params.base();
    let (n, k) = (params.n, params.k);
    Ok(trace_poly(n - k, q, host)?
        .q_shift(k)
        .sub(&trace_poly(k, q, host)?.scale(z)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// The `z` at the same index as `u`.
    Left,
    /// The next `z`.
    Right,
}

fn raw_z_step(raw: Raw, u: &FieldElement, dir: Direction) -> Result<FieldElement, TowerError> {
    let field = u.field();
    let a = int(field, raw.a);
    let b = int(field, raw.b);
    let tnk = trace_value(u, raw.e, raw.n - raw.k);
    let tk = trace_value(u, raw.e, raw.k);
    let (num, den) = match dir {
        Direction::Left => (&tnk - &a, &tk.q_power(raw.e, (raw.n - raw.k) as u64) - &b),
        Direction::Right => (&tnk.q_power(raw.e, raw.k as u64) - &a, &tk - &b),
    };
    num.checked_div(&den).map_err(|_| TowerError::PoleHit)
}

/// Left: `(Tr_{n−k}(u) − a)/(Tr_k(u)^{q^{n−k}} − b)`;
/// right: `(Tr_{n−k}(u)^{q^k} − a)/(Tr_k(u) − b)`.
pub fn z_step(params: &TowerParams, u: &FieldElement, dir: Direction) -> Result<FieldElement, TowerError> {
    raw_z_step(params.raw(), u, dir)
}

/// The z-step of the dual recursion, obtained by swapping `k ↔ n−k` and
/// `a ↔ b` literally: left is `(Tr_k(u) − b)/(Tr_{n−k}(u)^{q^k} − a)`,
/// right is `(Tr_k(u)^{q^{n−k}} − b)/(Tr_{n−k}(u) − a)`.
pub fn dual_z_step(params: &TowerParams, u: &FieldElement, dir: Direction) -> Result<FieldElement, TowerError> {
    raw_z_step(params.raw().swapped(), u, dir)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    /// `f_i`, attached to the same index as `u_i`.
    Same,
    /// `f_{i+1}`.
    Next,
}

/// `Tr_n(T) − c·Tr_{n−k}(T)` with `c = (Tr_n(u) − (a+b))/D` and
/// `D = Tr_{n−k}(u) − a` (same) or `Tr_{n−k}(u)^{q^k} − a` (next).
pub fn f_i_from_u(params: &TowerParams, u: &FieldElement, which: Which) -> Result<LinearizedPoly, TowerError> {
    let field = u.field();
    let (e, n, k) = (params.e, params.n, params.k);
    let tnk = trace_value(u, e, n - k);
    let den = match which {
        Which::Same => &tnk - &int(field, params.a),
        Which::Next => &tnk.q_power(e, k as u64) - &int(field, params.a),
    };
    let num = &trace_value(u, e, n) - &int(field, params.a + params.b);
    let c = num.checked_div(&den).map_err(|_| TowerError::PoleHit)?;
    let q = params.base();
    Ok(trace_poly(n, q, field)?.sub(&trace_poly(n - k, q, field)?.scale(&c)?)?)
}

/// `z = −x^{q^n − 1}`; equals `−1` for every `x ∈ F_ℓ^*`.
pub fn z_from_x(params: &TowerParams, x: &FieldElement) -> FieldElement {
    -&x.pow(params.ell - 1)
}
