//! q-additive (linearized) polynomials `h(T) = Σ_j c_j T^{q^j}`.
//!
//! Root spaces are computed as kernels of the F_p-linear map `a -> h(a)` on
//! an extension field, so no polynomial factorization is involved. The
//! splitting degree is found independently by iterating the Frobenius on
//! `F[X]/(h)`.

use std::fmt;

use num_integer::Integer;
use rand::RngCore;
use serde::Serialize;
use thiserror::Error;

use crate::ff::{find_embedding, make_field, prime_power, FfError, Field, FieldElement};
use crate::linalg::{FpMatrix, Span};
use crate::poly::Poly;

/// Default bound for [`splitting_degree`].
pub const DEFAULT_EXT_CAP: usize = 64;

/// Largest extension degree (over F_p) on which root spaces are computed.
pub const ROOT_SPACE_DEGREE_CAP: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinPolyError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("host field {host} does not contain F_{q}")]
    HostTooSmall { host: String, q: u64 },
    #[error("linearity bases differ (q = {0} vs q = {1})")]
    BaseMismatch(u64, u64),
    #[error("adjoint needs nonzero constant and leading coefficients")]
    NotSeparableOrZeroLead,
    #[error("polynomial is not separable (zero coefficient at T)")]
    NotSeparable,
    #[error("no splitting field of degree <= {cap} over the host")]
    CapExceeded { cap: usize },
    #[error("size cap exceeded: {0}")]
    SizeCapExceeded(String),
    #[error(transparent)]
    Field(#[from] FfError),
}

/// The linearity base `q = p^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QBase {
    p: u32,
    e: u32,
}

impl QBase {
    pub fn new(q: u64) -> Result<Self, LinPolyError> {
        let (p, e) = prime_power(q).ok_or(LinPolyError::NotPrimePower(q))?;
        if p >= 1 << 16 {
            return Err(LinPolyError::NotPrimePower(q));
        }
        Ok(QBase { p: p as u32, e })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    /// The field F_q itself.
    pub fn field(&self) -> Field {
        make_field(self.p as u64, self.e as usize).expect("valid prime power")
    }

    pub fn check_host(&self, host: &Field) -> Result<(), LinPolyError> {
        if host.characteristic() == self.p && host.contains_degree(self.e) {
            Ok(())
        } else {
            Err(LinPolyError::HostTooSmall {
                host: host.to_string(),
                q: self.q(),
            })
        }
    }
}

/// `Σ_j c_j T^{q^j}` with coefficients in a host field containing F_q.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearizedPoly {
    q: QBase,
    host: Field,
    coeffs: Vec<FieldElement>,
}

impl LinearizedPoly {
    pub fn new(q: QBase, host: &Field, coeffs: Vec<FieldElement>) -> Result<Self, LinPolyError> {
        q.check_host(host)?;
        if let Some(bad) = coeffs.iter().find(|c| c.field() != host) {
            return Err(FfError::FieldMismatch(host.id(), bad.field().id()).into());
        }
        Ok(Self::from_parts(q, host, coeffs))
    }

    fn from_parts(q: QBase, host: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LinearizedPoly {
            q,
            host: host.clone(),
            coeffs,
        }
    }

    pub fn zero(q: QBase, host: &Field) -> Result<Self, LinPolyError> {
        Self::new(q, host, Vec::new())
    }

    /// `c T^{q^j}`.
    pub fn monomial(q: QBase, c: FieldElement, j: usize) -> Result<Self, LinPolyError> {
        let host = c.field().clone();
        let mut coeffs = vec![host.zero(); j];
        coeffs.push(c);
        Self::new(q, &host, coeffs)
    }

    /// The polynomial `T`.
    pub fn identity(q: QBase, host: &Field) -> Result<Self, LinPolyError> {
        Self::monomial(q, host.one(), 0)
    }

    pub fn base(&self) -> QBase {
        self.q
    }

    pub fn host(&self) -> &Field {
        &self.host
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `T^{q^j}`, zero beyond the q-degree.
    pub fn coeff(&self, j: usize) -> FieldElement {
        self.coeffs.get(j).cloned().unwrap_or_else(|| self.host.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `t` such that the leading term is `c_t T^{q^t}`.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_separable(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }

    /// Whether every coefficient lies in F_q.
    pub fn has_fq_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.q_power(self.q.e, 1) == *c)
    }

    fn check_same(&self, other: &Self) -> Result<(), LinPolyError> {
        if self.q != other.q {
            return Err(LinPolyError::BaseMismatch(self.q.q(), other.q.q()));
        }
        if self.host != other.host {
            return Err(FfError::FieldMismatch(self.host.id(), other.host.id()).into());
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinPolyError> {
        self.check_same(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|j| &self.coeff(j) + &other.coeff(j)).collect();
        Ok(Self::from_parts(self.q, &self.host, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinPolyError> {
        self.add(&other.scale(&-self.host.one())?)
    }

    /// `c · h(T)`.
    pub fn scale(&self, c: &FieldElement) -> Result<Self, LinPolyError> {
        if c.field() != &self.host {
            return Err(FfError::FieldMismatch(self.host.id(), c.field().id()).into());
        }
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Ok(Self::from_parts(self.q, &self.host, coeffs))
    }

    /// `h(T)^{q^r} = Σ c_j^{q^r} T^{q^{j+r}}`.
    pub fn q_shift(&self, r: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.host.zero(); r];
        coeffs.extend(self.coeffs.iter().map(|c| c.q_power(self.q.e, r as u64)));
        Self::from_parts(self.q, &self.host, coeffs)
    }

    pub fn eval(&self, a: &FieldElement) -> Result<FieldElement, LinPolyError> {
        if a.field() != &self.host {
            return Err(FfError::FieldMismatch(self.host.id(), a.field().id()).into());
        }
        let mut acc = self.host.zero();
        let mut pow = a.clone();
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                pow = pow.q_power(self.q.e, 1);
            }
            if !c.is_zero() {
                acc += &(c * &pow);
            }
        }
        Ok(acc)
    }

    /// `self(other(T))`.
    pub fn compose(&self, other: &Self) -> Result<Self, LinPolyError> {
        self.check_same(other)?;
        let mut acc = Self::from_parts(self.q, &self.host, Vec::new());
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&other.q_shift(i).scale(c)?)?;
        }
        Ok(acc)
    }

    /// `h^ad(T) = Σ_i c_i^{q^{t-i}} T^{q^{t-i}}`.
    pub fn adjoint(&self) -> Result<Self, LinPolyError> {
        let t = self.q_degree().ok_or(LinPolyError::NotSeparableOrZeroLead)?;
        if !self.is_separable() {
            return Err(LinPolyError::NotSeparableOrZeroLead);
        }
        let mut coeffs = vec![self.host.zero(); t + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[t - i] = c.q_power(self.q.e, (t - i) as u64);
        }
        Ok(Self::from_parts(self.q, &self.host, coeffs))
    }

    /// Same polynomial with coefficients pushed into a larger field.
    pub fn embed_into(&self, target: &Field) -> Result<Self, LinPolyError> {
        if target == &self.host {
            return Ok(self.clone());
        }
        let emb = find_embedding(&self.host, target)?;
        let coeffs = self.coeffs.iter().map(|c| emb.apply(c)).collect::<Result<_, _>>()?;
        Ok(Self::from_parts(self.q, target, coeffs))
    }

    /// Dense ordinary polynomial of degree `q^t`.
    pub fn to_poly(&self) -> Poly {
        let Some(t) = self.q_degree() else {
            return Poly::zero(&self.host);
        };
        let q = self.q.q() as usize;
        let mut dense = vec![self.host.zero(); q.pow(t as u32) + 1];
        let mut exp = 1;
        for c in &self.coeffs {
            dense[exp] = c.clone();
            exp *= q;
        }
        Poly::new(&self.host, dense).expect("coefficients live in the host")
    }
}

impl fmt::Debug for LinearizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {} (q={})", self.host, self.q.q())
    }
}

impl fmt::Display for LinearizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match j {
                0 => "T".to_string(),
                1 => "T^q".to_string(),
                _ => format!("T^q^{j}"),
            };
            if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({c}){mono}")?;
            }
        }
        Ok(())
    }
}

/// `Tr_i(T) = T + T^q + ... + T^{q^{i-1}}`; `i = 0` gives the zero polynomial.
pub fn trace_poly(i: usize, q: QBase, host: &Field) -> Result<LinearizedPoly, LinPolyError> {
    q.check_host(host)?;
    LinearizedPoly::new(q, host, vec![host.one(); i])
}

pub fn lin_eval(h: &LinearizedPoly, a: &FieldElement) -> Result<FieldElement, LinPolyError> {
    h.eval(a)
}

pub fn lin_compose(h1: &LinearizedPoly, h2: &LinearizedPoly) -> Result<LinearizedPoly, LinPolyError> {
    if h1.q != h2.q {
        return Err(LinPolyError::BaseMismatch(h1.q.q(), h2.q.q()));
    }
    // bring both into the larger host when one contains the other
    let (a, b) = if h1.host == h2.host {
        (h1.clone(), h2.clone())
    } else if h2.host.degree().is_multiple_of(h1.host.degree()) {
        (h1.embed_into(&h2.host)?, h2.clone())
    } else {
        (h1.clone(), h2.embed_into(&h1.host)?)
    };
    a.compose(&b)
}

pub fn adjoint(h: &LinearizedPoly) -> Result<LinearizedPoly, LinPolyError> {
    h.adjoint()
}

/// The F_q-space of roots of a separable `h` inside a field `E`.
#[derive(Clone, Debug)]
pub struct RootSpace {
    poly: LinearizedPoly,
    field: Field,
    basis: Vec<FieldElement>,
    fp_basis: Vec<FieldElement>,
}

impl RootSpace {
    /// The polynomial, with coefficients in [`RootSpace::field`].
    pub fn poly(&self) -> &LinearizedPoly {
        &self.poly
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// An F_q-basis.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    /// An F_p-basis (`e · dim` vectors).
    pub fn fp_basis(&self) -> &[FieldElement] {
        &self.fp_basis
    }

    /// Dimension over F_q.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of roots, `q^dim`.
    pub fn cardinality(&self) -> u64 {
        self.poly.q.q().pow(self.dim() as u32)
    }

    /// Every root, sorted in enumeration order.
    pub fn elements(&self) -> Vec<FieldElement> {
        let p = self.field.characteristic();
        let mut out = vec![self.field.zero()];
        for b in &self.fp_basis {
            let mut next = Vec::with_capacity(out.len() * p as usize);
            for x in &out {
                for c in 0..p {
                    next.push(x + &b.scale(c as i64));
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.field() == &self.field && self.poly.eval(x).is_ok_and(|v| v.is_zero())
    }

    /// F_p-coordinates of `x` in [`RootSpace::fp_basis`], if `x` is a root.
    pub fn coordinates(&self, x: &FieldElement) -> Option<Vec<u32>> {
        if x.field() != &self.field {
            return None;
        }
        let cols: Vec<Vec<u32>> = self.fp_basis.iter().map(|b| b.coeffs().to_vec()).collect();
        let m = FpMatrix::from_columns(self.field.characteristic(), self.field.degree(), &cols);
        m.solve(x.coeffs())
    }
}

/// Kernel of `a -> h(a)` on `E`, by elimination over F_p.
pub fn root_space(h: &LinearizedPoly, field: &Field) -> Result<RootSpace, LinPolyError> {
    if !h.is_separable() {
        return Err(LinPolyError::NotSeparable);
    }
    if field.degree() > ROOT_SPACE_DEGREE_CAP {
        return Err(LinPolyError::SizeCapExceeded(format!(
            "{field} has degree above {ROOT_SPACE_DEGREE_CAP}"
        )));
    }
    let poly = h.embed_into(field)?;
    let p = field.characteristic();
    let m = field.degree();
    let columns: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            let mut unit = vec![0; m];
            unit[i] = 1;
            let x = field.from_coeffs(&unit).expect("length m");
            poly.eval(&x).expect("same field").coeffs().to_vec()
        })
        .collect();
    let kernel = FpMatrix::from_columns(p, m, &columns).kernel();
    let fp_basis: Vec<FieldElement> = kernel.iter().map(|v| field.from_coeffs(v).expect("length m")).collect();
    let basis = fq_basis(h.q, field, &fp_basis)?;
    Ok(RootSpace {
        poly,
        field: field.clone(),
        basis,
        fp_basis,
    })
}

/// Extracts an F_q-basis from an F_p-basis of an F_q-stable subspace.
fn fq_basis(q: QBase, field: &Field, fp_basis: &[FieldElement]) -> Result<Vec<FieldElement>, LinPolyError> {
    if q.e == 1 {
        return Ok(fp_basis.to_vec());
    }
    let omega = find_embedding(&q.field(), field)?.generator_image().clone();
    let mut span = Span::new(field.characteristic(), field.degree());
    let mut basis = Vec::new();
    for v in fp_basis {
        if span.contains(v.coeffs()) {
            continue;
        }
        basis.push(v.clone());
        let mut w = v.clone();
        for _ in 0..q.e {
            span.insert(w.coeffs());
            w = &w * &omega;
        }
    }
    debug_assert_eq!(basis.len() * q.e as usize, fp_basis.len());
    Ok(basis)
}

/// The degree-`s` extension of `host` (as a canonical absolute field).
pub fn extension_of(host: &Field, s: usize) -> Result<Field, FfError> {
    make_field(host.characteristic() as u64, host.degree() * s)
}

/// Smallest `s ≥ 1` such that `h` splits over the degree-`s` extension of
/// its host: the least `s` with `X^{|host|^s} ≡ X (mod h)`.
pub fn splitting_degree(h: &LinearizedPoly, cap: usize) -> Result<usize, LinPolyError> {
    if !h.is_separable() {
        return Err(LinPolyError::NotSeparable);
    }
    if h.q_degree() == Some(0) {
        return Ok(1);
    }
    let modulus = h.to_poly();
    let x = Poly::x(&h.host);
    let mut r = x.clone();
    for s in 1..=cap {
        for _ in 0..h.host.degree() {
            r = r.pth_power_mod(&modulus);
        }
        if r == x {
            return Ok(s);
        }
    }
    Err(LinPolyError::CapExceeded { cap })
}

/// Outcome of checking `Tr_{ai} - Tr_{bj}^{q^r} = Tr_r` for one `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EuclidVerdict {
    pub i: usize,
    pub j: usize,
    pub q: u64,
    pub r: usize,
    pub a: usize,
    pub b: usize,
    /// Coefficient-list identity `Tr_{ai} - Tr_{bj}^{q^r} = Tr_r`.
    pub formal: bool,
    /// The expanded sums `Σ Tr_i^{q^{αi}} - (Σ Tr_j^{q^{βj}})^{q^r} = Tr_r`.
    pub formal_sums: bool,
    pub trials: usize,
    pub numeric_failures: usize,
    pub witness: Option<String>,
}

impl EuclidVerdict {
    pub fn passed(&self) -> bool {
        self.formal && self.formal_sums && self.numeric_failures == 0
    }
}

/// Minimal `a ≥ 1` (and the forced `b ≥ 0`) with `a·i - b·j = gcd(i, j)`.
pub fn bezout_min_a(i: usize, j: usize) -> (usize, usize, usize) {
    let r = i.gcd(&j);
    for a in 1..=j / r {
        let ai = a * i;
        if ai >= r && (ai - r).is_multiple_of(j) {
            return (a, (ai - r) / j, r);
        }
    }
    unreachable!("a Bezout pair exists with 1 <= a <= j / gcd(i, j)")
}

fn euclid_sum_form(
    i: usize,
    j: usize,
    a: usize,
    b: usize,
    r: usize,
    q: QBase,
    host: &Field,
) -> Result<LinearizedPoly, LinPolyError> {
    let tri = trace_poly(i, q, host)?;
    let trj = trace_poly(j, q, host)?;
    let mut left = LinearizedPoly::zero(q, host)?;
    for alpha in 0..a {
        left = left.add(&tri.q_shift(alpha * i))?;
    }
    let mut right = LinearizedPoly::zero(q, host)?;
    for beta in 0..b {
        right = right.add(&trj.q_shift(beta * j))?;
    }
    left.sub(&right.q_shift(r))
}

/// Verifies the explicit Euclid identity formally (two ways) and at
/// `trials` random points of `F_{q^L}`, `L = lcm(i, j)`.
pub fn euclid_identity_check(
    i: usize,
    j: usize,
    q: u64,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<EuclidVerdict, LinPolyError> {
    assert!(i >= 1 && j >= 1, "trace indices start at 1");
    let base = QBase::new(q)?;
    let fq = base.field();
    let (a, b, r) = bezout_min_a(i, j);
    let tr_r = trace_poly(r, base, &fq)?;

    let direct = trace_poly(a * i, base, &fq)?.sub(&trace_poly(b * j, base, &fq)?.q_shift(r))?;
    let formal = direct == tr_r;
    let sums = euclid_sum_form(i, j, a, b, r, base, &fq)?;
    let formal_sums = sums == tr_r;

    let big = make_field(base.p as u64, base.e as usize * i.lcm(&j))?;
    let tri = trace_poly(i, base, &big)?;
    let trj = trace_poly(j, base, &big)?;
    let trr = trace_poly(r, base, &big)?;
    let mut numeric_failures = 0;
    let mut witness = None;
    for _ in 0..trials {
        let x = big.random(rng);
        let ti = tri.eval(&x)?;
        let tj = trj.eval(&x)?;
        let mut left = big.zero();
        for alpha in 0..a {
            left += &ti.q_power(base.e, (alpha * i) as u64);
        }
        let mut right = big.zero();
        for beta in 0..b {
            right += &tj.q_power(base.e, (beta * j) as u64);
        }
        let lhs = &left - &right.q_power(base.e, r as u64);
        if lhs != trr.eval(&x)? {
            numeric_failures += 1;
            witness.get_or_insert_with(|| format!("x = {x}"));
        }
    }
    if !formal {
        witness.get_or_insert_with(|| format!("formal difference {direct} vs {tr_r}"));
    }
    Ok(EuclidVerdict {
        i,
        j,
        q,
        r,
        a,
        b,
        formal,
        formal_sums,
        trials,
        numeric_failures,
        witness,
    })
}
