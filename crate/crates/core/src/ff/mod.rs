//! Finite fields F_{p^m} with a canonical model per `(p, m)`.
//!
//! A field is `F_p[T]/(P)` where `P` is the smallest monic irreducible of
//! degree `m` (see [`fp::smallest_irreducible`] for the order). Elements are
//! coordinate vectors in the power basis `1, α, ..., α^{m-1}` of the class
//! `α` of `T`. Fields are interned, so two calls to [`make_field`] with the
//! same arguments return handles to the same descriptor.

mod embed;
pub(crate) mod fp;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, LazyLock, Mutex};

use rand::RngCore;
use thiserror::Error;

pub use embed::{find_embedding, Embedding};
pub use fp::prime_power;

/// Largest field that may be listed element by element.
pub const ENUMERATION_CAP: u64 = 1 << 24;

/// Largest extension degree over the prime field that [`make_field`] builds.
pub const MAX_DEGREE: usize = 2048;

/// Characteristics are kept below 2^16 so products fit comfortably in `u64`.
const MAX_CHARACTERISTIC: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("size cap exceeded: {0}")]
    SizeCapExceeded(String),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("operands live in different fields ({0} vs {1})")]
    FieldMismatch(FieldId, FieldId),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot embed {0} into {1}")]
    IncompatibleFields(FieldId, FieldId),
    #[error("expected {expected} coordinates, got {got}")]
    BadCoordinates { expected: usize, got: usize },
}

/// `(p, m)`, which determines a field up to the canonical model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId {
    pub p: u32,
    pub m: usize,
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.m)
        }
    }
}

struct FieldInner {
    id: FieldId,
    modulus: Vec<u32>,
    /// Nonzero terms of `-(P - T^m)`, used for reduction.
    reducer: Vec<(usize, u32)>,
    /// `frob[i]` holds the coordinates of `α^{p·i}`.
    frob: Vec<Vec<u32>>,
}

/// Handle to a canonical finite field. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

/// Alias matching the descriptor terminology used in reports.
pub type FieldDescriptor = Field;

static FIELDS: LazyLock<Mutex<HashMap<FieldId, Field>>> = LazyLock::new(Default::default);

/// Builds (or fetches) the canonical field with `p^m` elements.
pub fn make_field(p: u64, m: usize) -> Result<Field, FfError> {
    if !fp::is_prime(p) {
        return Err(FfError::NotPrime(p));
    }
    if m == 0 {
        return Err(FfError::ZeroDegree);
    }
    if p >= MAX_CHARACTERISTIC {
        return Err(FfError::SizeCapExceeded(format!(
            "characteristic {p} exceeds {MAX_CHARACTERISTIC}"
        )));
    }
    if m > MAX_DEGREE {
        return Err(FfError::SizeCapExceeded(format!("degree {m} exceeds {MAX_DEGREE}")));
    }
    let id = FieldId { p: p as u32, m };
    if let Some(f) = FIELDS.lock().unwrap().get(&id) {
        return Ok(f.clone());
    }
    // Built outside the lock; a concurrent builder produces the same value.
    let field = Field::build(id);
    let mut cache = FIELDS.lock().unwrap();
    Ok(cache.entry(id).or_insert(field).clone())
}

impl Field {
    fn build(id: FieldId) -> Field {
        let FieldId { p, m } = id;
        let modulus = fp::smallest_irreducible(p, m);
        let reducer = modulus[..m]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, fp::sub(0, c, p)))
            .collect();
        let mut inner = FieldInner {
            id,
            modulus,
            reducer,
            frob: Vec::new(),
        };
        // α^{p i} for i < m, by repeated multiplication with α^p
        let alpha = if m == 1 {
            vec![inner.root_of_linear()]
        } else {
            let mut v = vec![0; m];
            v[1] = 1;
            v
        };
        let alpha_p = inner.pow_raw(&alpha, p as u64);
        let mut cur = {
            let mut one = vec![0; m];
            one[0] = 1 % p;
            one
        };
        let mut frob = Vec::with_capacity(m);
        for _ in 0..m {
            frob.push(cur.clone());
            cur = inner.mul_raw(&cur, &alpha_p);
        }
        inner.frob = frob;
        Field(Arc::new(inner))
    }

    pub fn id(&self) -> FieldId {
        self.0.id
    }

    pub fn characteristic(&self) -> u32 {
        self.0.id.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.0.id.m
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// `p^m`, or `None` when it does not fit in a `u64`.
    pub fn order(&self) -> Option<u64> {
        (self.0.id.p as u64).checked_pow(self.0.id.m as u32)
    }

    /// Whether `F_{p^e}` is a subfield, i.e. `e | m`.
    pub fn contains_degree(&self, e: u32) -> bool {
        e >= 1 && self.degree().is_multiple_of(e as usize)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The class of `T`, a root of the modulus.
    pub fn generator(&self) -> FieldElement {
        let mut e = self.zero();
        if self.degree() == 1 {
            e.coeffs[0] = self.0.root_of_linear();
        } else {
            e.coeffs[1] = 1;
        }
        e
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = fp::from_i64(v, self.characteristic());
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, FfError> {
        if coeffs.len() != self.degree() {
            return Err(FfError::BadCoordinates {
                expected: self.degree(),
                got: coeffs.len(),
            });
        }
        let p = self.characteristic();
        Ok(FieldElement {
            field: self.clone(),
            coeffs: coeffs.iter().map(|&c| c % p).collect(),
        })
    }

    /// Element with enumeration index `idx` (base-p digits, `c_0` lowest).
    pub fn element_at(&self, mut idx: u64) -> FieldElement {
        let p = self.characteristic() as u64;
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = (idx % p) as u32;
            idx /= p;
        }
        e
    }

    /// Uniform element drawn from `rng`: each coordinate is `next_u64() % p`,
    /// lowest coordinate first.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let p = self.characteristic() as u64;
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = (rng.next_u64() % p) as u32;
        }
        e
    }

    pub fn random_nonzero<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    fn check(&self, other: &Field) -> Result<(), FfError> {
        if self == other {
            Ok(())
        } else {
            Err(FfError::FieldMismatch(self.id(), other.id()))
        }
    }
}

impl FieldInner {
    fn root_of_linear(&self) -> u32 {
        // modulus T + c0, root -c0
        fp::sub(0, self.modulus[0], self.id.p)
    }

    /// Reduces a wide coefficient vector (entries already `< p`) mod P.
    fn reduce_wide(&self, wide: &[u64]) -> Vec<u32> {
        let p = self.id.p;
        let m = self.id.m;
        let mut t: Vec<u32> = wide.iter().map(|&c| (c % p as u64) as u32).collect();
        for d in (m..t.len()).rev() {
            let c = t[d];
            if c == 0 {
                continue;
            }
            t[d] = 0;
            let shift = d - m;
            for &(i, r) in &self.reducer {
                t[shift + i] = fp::add(t[shift + i], fp::mul(c, r, p), p);
            }
        }
        t.resize(m, 0);
        t
    }

    fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let m = self.id.m;
        let p = self.id.p as u64;
        let mut acc = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u64;
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += x * y as u64;
            }
            if i % 4096 == 4095 {
                acc.iter_mut().for_each(|c| *c %= p);
            }
        }
        self.reduce_wide(&acc)
    }

    fn pow_raw(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut base = a.to_vec();
        let mut acc = vec![0; self.id.m];
        acc[0] = 1 % self.id.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        acc
    }

    fn frobenius_raw(&self, a: &[u32]) -> Vec<u32> {
        let p = self.id.p as u64;
        let m = self.id.m;
        let mut acc = vec![0u64; m];
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (slot, &f) in acc.iter_mut().zip(&self.frob[i]) {
                *slot += c as u64 * f as u64;
            }
            if i % 4096 == 4095 {
                acc.iter_mut().for_each(|c| *c %= p);
            }
        }
        acc.into_iter().map(|c| (c % p) as u32).collect()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.id == other.0.id
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {:?}", self.id(), self.modulus())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.id().fmt(f)
    }
}

/// All `p^m` elements in enumeration order (index `Σ c_i p^i`); 0 first.
pub fn enumerate_field(field: &Field) -> Result<Vec<FieldElement>, FfError> {
    let size = field
        .order()
        .filter(|&n| n <= ENUMERATION_CAP)
        .ok_or_else(|| FfError::SizeCapExceeded(format!("{field} has more than {ENUMERATION_CAP} elements")))?;
    Ok((0..size).map(|i| field.element_at(i)).collect())
}

/// An element of a finite field, as coordinates over the prime field.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Enumeration index, when it fits in a `u64`.
    pub fn index(&self) -> Option<u64> {
        let p = self.field.characteristic() as u64;
        self.coeffs
            .iter()
            .rev()
            .try_fold(0u64, |acc, &c| acc.checked_mul(p)?.checked_add(c as u64))
    }

    /// The prime-field value if this element lies in F_p.
    pub fn as_prime(&self) -> Option<u32> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, FfError> {
        self.field.check(&rhs.field)?;
        let p = self.field.characteristic();
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| fp::add(a, b, p))
                .collect(),
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, FfError> {
        self.field.check(&rhs.field)?;
        let p = self.field.characteristic();
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| fp::sub(a, b, p))
                .collect(),
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, FfError> {
        self.field.check(&rhs.field)?;
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: self.field.0.mul_raw(&self.coeffs, &rhs.coeffs),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FfError> {
        self.field.check(&rhs.field)?;
        self.checked_mul(&rhs.inv()?)
    }

    pub fn inv(&self) -> Result<Self, FfError> {
        if self.is_zero() {
            return Err(FfError::DivisionByZero);
        }
        let p = self.field.characteristic();
        let mut a = self.coeffs.clone();
        fp::trim(&mut a);
        let mut inv = fp::poly_inv_mod(&a, &self.field.0.modulus, p).expect("nonzero element of a field is invertible");
        inv.resize(self.field.degree(), 0);
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: inv,
        })
    }

    /// Multiplication by an integer (reduced mod p).
    pub fn scale(&self, k: i64) -> Self {
        let p = self.field.characteristic();
        let k = fp::from_i64(k, p);
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| fp::mul(c, k, p)).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.field.0.pow_raw(&self.coeffs, e),
        }
    }

    /// `a^(p^e)`.
    pub fn frobenius(&self, e: u64) -> Self {
        let reps = e % self.field.degree() as u64;
        let mut coeffs = self.coeffs.clone();
        for _ in 0..reps {
            coeffs = self.field.0.frobenius_raw(&coeffs);
        }
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// `a^(q^j)` where `q = p^e`.
    pub fn q_power(&self, e: u32, j: u64) -> Self {
        self.frobenius(e as u64 * j)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.coeffs.hash(state);
    }
}

/// Enumeration order: field first, then coordinates from the highest down.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .id()
            .cmp(&other.field.id())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Polynomial notation in the generator `a`, highest power first.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "a")?,
                (1, c) => write!(f, "{c}a")?,
                (i, 1) => write!(f, "a^{i}")?,
                (i, c) => write!(f, "{c}a^{i}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.zero() - self
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic in a single field.
pub fn field_arithmetic(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FfError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

/// `a^(p^e)`; the free-function form of [`FieldElement::frobenius`].
pub fn frobenius(a: &FieldElement, e: u64) -> FieldElement {
    a.frobenius(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> Field {
        make_field(2, 3).unwrap()
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(make_field(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_field(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), FfError::NotPrime(4));
        assert_eq!(make_field(1, 1).unwrap_err(), FfError::NotPrime(1));
        assert_eq!(make_field(2, 0).unwrap_err(), FfError::ZeroDegree);
        assert!(matches!(
            make_field(2, MAX_DEGREE + 1),
            Err(FfError::SizeCapExceeded(_))
        ));
        assert!(matches!(make_field(65537, 1), Err(FfError::SizeCapExceeded(_))));
    }

    #[test]
    fn f8_multiplication() {
        let f = f8();
        let a = f.generator();
        let a2 = &a * &a;
        assert_eq!(&a * &a2, &a + &f.one());
    }

    #[test]
    fn f8_frobenius() {
        let f = f8();
        let a = f.generator();
        assert_eq!(a.frobenius(1), &a * &a);
        assert_eq!(a.frobenius(0), a);
        assert_eq!(a.frobenius(3), a);
    }

    #[test]
    fn identities_and_inverse() {
        let f = make_field(3, 3).unwrap();
        for x in enumerate_field(&f).unwrap() {
            assert_eq!(&x + &f.zero(), x);
            if !x.is_zero() {
                assert!((&x * &x.inv().unwrap()).is_one());
            }
        }
        assert_eq!(f.zero().inv().unwrap_err(), FfError::DivisionByZero);
    }

    #[test]
    fn mismatched_fields() {
        let a = f8().one();
        let b = make_field(2, 2).unwrap().one();
        assert!(matches!(
            field_arithmetic(&a, &b, ArithOp::Add),
            Err(FfError::FieldMismatch(_, _))
        ));
        assert_eq!(
            field_arithmetic(&a, &f8().zero(), ArithOp::Div).unwrap_err(),
            FfError::DivisionByZero
        );
    }

    #[test]
    fn enumeration_order() {
        let f2 = make_field(2, 1).unwrap();
        let e2 = enumerate_field(&f2).unwrap();
        assert_eq!(e2, vec![f2.zero(), f2.one()]);
        let e8 = enumerate_field(&f8()).unwrap();
        assert_eq!(e8.len(), 8);
        assert!(e8[0].is_zero());
        assert!(e8[1].is_one());
        assert!(e8.windows(2).all(|w| w[0] < w[1]));
        let e4 = enumerate_field(&make_field(2, 2).unwrap()).unwrap();
        assert_eq!(e4.len(), 4);
        assert!(matches!(
            enumerate_field(&make_field(2, 25).unwrap()),
            Err(FfError::SizeCapExceeded(_))
        ));
    }

    #[test]
    fn frobenius_closes_on_full_sweep() {
        for (p, m) in [(2u64, 12usize), (3, 7), (5, 5), (7, 4)] {
            let f = make_field(p, m).unwrap();
            for x in enumerate_field(&f).unwrap() {
                assert_eq!(x.frobenius(m as u64), x);
                assert_eq!(x.frobenius(1), x.pow(p));
            }
        }
    }

    #[test]
    fn interned() {
        let a = make_field(5, 3).unwrap();
        let b = make_field(5, 3).unwrap();
        assert!(Arc::ptr_eq(&a.0, &b.0));
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn prime_field_generator_is_root_of_modulus() {
        let f = make_field(5, 1).unwrap();
        // modulus is T, so the generator is 0
        assert!(f.generator().is_zero());
        assert!(f.one().is_one());
    }

    #[test]
    fn large_degree_field_is_consistent() {
        let f = make_field(3, 104).unwrap();
        let a = f.generator();
        let x = &a.pow(17) + &f.from_int(2);
        assert!((&x * &x.inv().unwrap()).is_one());
        assert_eq!(x.frobenius(104), x);
        assert_eq!(x.frobenius(1), x.pow(3));
    }
}
