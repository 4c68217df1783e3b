//! Dense univariate polynomials over a finite field.

use std::fmt;

use crate::ff::{enumerate_field, FfError, Field, FieldElement};

/// `Σ c_i X^i`, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &Field, coeffs: Vec<FieldElement>) -> Result<Self, FfError> {
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(FfError::FieldMismatch(field.id(), bad.field().id()));
        }
        Ok(Self::from_vec(field, coeffs))
    }

    fn from_vec(field: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    /// `c X^d`.
    pub fn monomial(c: FieldElement, d: usize) -> Self {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); d];
        coeffs.push(c);
        Self::from_vec(&field, coeffs)
    }

    pub fn x(field: &Field) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::monomial(c, 0)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a + b
            })
            .collect();
        Self::from_vec(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Self::from_vec(&self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::from_vec(&self.field, out)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = divisor.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(&self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for d in (dd..r.len()).rev() {
            if r[d].is_zero() {
                continue;
            }
            let c = &r[d] * &lead_inv;
            let shift = d - dd;
            for (i, m) in divisor.coeffs.iter().enumerate() {
                if !m.is_zero() {
                    r[shift + i] -= &(&c * m);
                }
            }
            q[shift] = c;
        }
        r.truncate(dd);
        (Self::from_vec(&self.field, q), Self::from_vec(&self.field, r))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divmod(divisor).1
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^p mod modulus`, using `(Σ c_i X^i)^p = Σ c_i^p X^{ip}`.
    pub fn pth_power_mod(&self, modulus: &Poly) -> Poly {
        let p = self.field.characteristic() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut spread = vec![self.field.zero(); (self.coeffs.len() - 1) * p + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            spread[i * p] = c.frobenius(1);
        }
        Self::from_vec(&self.field, spread).rem(modulus)
    }

    /// Distinct roots in the coefficient field, found by evaluating at every
    /// element. Sorted in enumeration order.
    pub fn roots_by_sweep(&self) -> Result<Vec<FieldElement>, FfError> {
        Ok(enumerate_field(&self.field)?
            .into_iter()
            .filter(|x| self.eval(x).is_zero())
            .collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 if c.is_one() => write!(f, "X")?,
                _ if c.is_one() => write!(f, "X^{i}")?,
                1 => write!(f, "({c})X")?,
                _ => write!(f, "({c})X^{i}")?,
            }
        }
        Ok(())
    }
}
