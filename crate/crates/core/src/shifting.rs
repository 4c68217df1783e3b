//! The shift map between root spaces of consecutive `f_i`, the trace map
//! from roots of `g` to roots of `(z·f)^ad`, and splitting-field equality.

use serde::Serialize;
use thiserror::Error;

use crate::ff::{FfError, Field, FieldElement};
use crate::linalg::FpMatrix;
use crate::linpoly::{adjoint, extension_of, root_space, splitting_degree, LinPolyError, RootSpace};
use crate::tower::{f_i_from_u, f_poly, g_poly, trace_value, TowerError, TowerParams, Which};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("precondition violated: {0}")]
    PrecondViolated(String),
    #[error("field does not contain the full root space ({found} of {needed} dimensions)")]
    SplittingTooSmall { found: usize, needed: usize },
    #[error("denominator vanishes")]
    PoleHit,
    #[error(transparent)]
    Tower(TowerError),
    #[error(transparent)]
    Lin(#[from] LinPolyError),
    #[error(transparent)]
    Field(#[from] FfError),
}

impl From<TowerError> for ShiftError {
    fn from(e: TowerError) -> Self {
        match e {
            TowerError::PoleHit => ShiftError::PoleHit,
            other => ShiftError::Tower(other),
        }
    }
}

fn int(field: &Field, v: u64) -> FieldElement {
    field.from_int((v % field.characteristic() as u64) as i64)
}

/// Traces of `u` that the shift formulas divide by.
struct UData {
    tk_minus_b: FieldElement,
    tnk_minus_a: FieldElement,
    /// `(Tr_n(u) − (a+b))/(Tr_{n−k}(u) − a)`.
    c_same: FieldElement,
}

fn u_data(params: &TowerParams, u: &FieldElement) -> Result<UData, ShiftError> {
    let field = u.field();
    let (e, n, k) = (params.e(), params.n(), params.k());
    let tk_minus_b = &trace_value(u, e, k) - &int(field, params.b());
    let tnk_minus_a = &trace_value(u, e, n - k) - &int(field, params.a());
    if tk_minus_b.is_zero() || tnk_minus_a.is_zero() {
        return Err(ShiftError::PoleHit);
    }
    let num = &trace_value(u, e, n) - &int(field, params.a() + params.b());
    let c_same = &num / &tnk_minus_a;
    Ok(UData {
        tk_minus_b,
        tnk_minus_a,
        c_same,
    })
}

fn same_field(u: &FieldElement, s: &FieldElement) -> Result<(), ShiftError> {
    if u.field() != s.field() {
        return Err(FfError::FieldMismatch(u.field().id(), s.field().id()).into());
    }
    Ok(())
}

fn require_root(params: &TowerParams, u: &FieldElement, s: &FieldElement) -> Result<(), ShiftError> {
    let fi = f_i_from_u(params, u, Which::Same)?;
    if !fi.eval(s)?.is_zero() {
        return Err(ShiftError::PrecondViolated(format!("{s} is not a root of f_i")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrepVerdict {
    /// `(Tr_k(s)/(Tr_k(u) − b))^{q^{n−k}} = Tr_{n−k}(s)/(Tr_{n−k}(u) − a)`.
    pub ratio_relation: bool,
    /// `Tr_{n−k}(s)^{q^k} = Tr_{n−k}(s)·c − Tr_k(s)`, `c` the f_i coefficient.
    pub trace_relation: bool,
}

impl PrepVerdict {
    pub fn passed(&self) -> bool {
        self.ratio_relation && self.trace_relation
    }
}

/// Both relations for a root `s` of `f_i`.
pub fn prep_identities(params: &TowerParams, u: &FieldElement, s: &FieldElement) -> Result<PrepVerdict, ShiftError> {
    same_field(u, s)?;
    require_root(params, u, s)?;
    prep_identities_unchecked(params, u, s)
}

/// The same relations without requiring `f_i(s) = 0`; used for negative
/// controls.
pub fn prep_identities_unchecked(
    params: &TowerParams,
    u: &FieldElement,
    s: &FieldElement,
) -> Result<PrepVerdict, ShiftError> {
    same_field(u, s)?;
    let d = u_data(params, u)?;
    let (e, n, k) = (params.e(), params.n(), params.k());
    let tk_s = trace_value(s, e, k);
    let tnk_s = trace_value(s, e, n - k);
    let lhs = (&tk_s / &d.tk_minus_b).q_power(e, (n - k) as u64);
    let ratio_relation = lhs == &tnk_s / &d.tnk_minus_a;
    let trace_relation = tnk_s.q_power(e, k as u64) == &(&tnk_s * &d.c_same) - &tk_s;
    Ok(PrepVerdict {
        ratio_relation,
        trace_relation,
    })
}

/// `w^q − w` with `w = Tr_k(s)/(Tr_k(u) − b)`, for any `s`.
pub fn shift_map(params: &TowerParams, u: &FieldElement, s: &FieldElement) -> Result<FieldElement, ShiftError> {
    same_field(u, s)?;
    let tk_minus_b = &trace_value(u, params.e(), params.k()) - &int(u.field(), params.b());
    let w = trace_value(s, params.e(), params.k())
        .checked_div(&tk_minus_b)
        .map_err(|_| ShiftError::PoleHit)?;
    Ok(&w.q_power(params.e(), 1) - &w)
}

/// The shift of a root `s` of `f_i`; the result is a root of `f_{i+1}`.
pub fn shift(params: &TowerParams, u: &FieldElement, s: &FieldElement) -> Result<FieldElement, ShiftError> {
    same_field(u, s)?;
    u_data(params, u)?;
    require_root(params, u, s)?;
    shift_map(params, u, s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftWitness {
    pub params: TowerParams,
    pub field: Field,
    pub u: FieldElement,
    pub s: FieldElement,
    pub s_next: FieldElement,
}

impl ShiftWitness {
    /// Shifts `s` and checks that the image is a root of `f_{i+1}`.
    pub fn new(params: &TowerParams, u: &FieldElement, s: &FieldElement) -> Result<Self, ShiftError> {
        let s_next = shift(params, u, s)?;
        let next = f_i_from_u(params, u, Which::Next)?;
        if !next.eval(&s_next)?.is_zero() {
            return Err(ShiftError::PrecondViolated(format!(
                "shift of {s} is not a root of f_(i+1)"
            )));
        }
        Ok(ShiftWitness {
            params: *params,
            field: u.field().clone(),
            u: u.clone(),
            s: s.clone(),
            s_next,
        })
    }
}

#[derive(Debug, Clone)]
pub struct PhiReport {
    pub dim_source: usize,
    pub dim_target: usize,
    /// Matrix of the shift over F_p in the F_p-bases of both root spaces
    /// (`(n−1)·e` square).
    pub matrix: FpMatrix,
    pub rank: usize,
    pub images_in_target: bool,
    pub fq_linear: bool,
}

impl PhiReport {
    pub fn bijective(&self) -> bool {
        self.images_in_target
            && self.dim_source == self.dim_target
            && self.rank == self.matrix.rows()
            && self.rank == self.matrix.cols()
    }
}

fn full_dim(space: &RootSpace, needed: usize) -> Result<(), ShiftError> {
    if space.dim() != needed {
        return Err(ShiftError::SplittingTooSmall {
            found: space.dim(),
            needed,
        });
    }
    Ok(())
}

/// The shift restricted to `V`, the root space of `f_i` attached to `u`.
pub fn phi_matrix(params: &TowerParams, u: &FieldElement, v: &RootSpace) -> Result<PhiReport, ShiftError> {
    let needed = params.n() - 1;
    full_dim(v, needed)?;
    if u.field() != v.field() {
        return Err(FfError::FieldMismatch(v.field().id(), u.field().id()).into());
    }
    u_data(params, u)?;
    let f_same = f_i_from_u(params, u, Which::Same)?;
    if let Some(b) = v.basis().iter().find(|b| !f_same.eval(b).is_ok_and(|x| x.is_zero())) {
        return Err(ShiftError::PrecondViolated(format!("{b} is not a root of f_i")));
    }
    let w = root_space(&f_i_from_u(params, u, Which::Next)?, v.field())?;
    full_dim(&w, needed)?;

    let images: Vec<FieldElement> = v
        .fp_basis()
        .iter()
        .map(|b| shift_map(params, u, b))
        .collect::<Result<_, _>>()?;
    let coords: Vec<Option<Vec<u32>>> = images.iter().map(|x| w.coordinates(x)).collect();
    let images_in_target = coords.iter().all(Option::is_some);
    let rows = w.fp_basis().len();
    let columns: Vec<Vec<u32>> = coords.into_iter().map(|c| c.unwrap_or_else(|| vec![0; rows])).collect();
    let matrix = FpMatrix::from_columns(params.p() as u32, rows, &columns);
    let rank = matrix.rank();

    let omega = crate::ff::find_embedding(&params.base().field(), v.field())?
        .generator_image()
        .clone();
    let mut fq_linear = true;
    for (i, b) in v.fp_basis().iter().enumerate() {
        fq_linear &= shift_map(params, u, &(&omega * b))? == &omega * &images[i];
        if let Some(b2) = v.fp_basis().get(i + 1) {
            fq_linear &= shift_map(params, u, &(b + b2))? == &images[i] + &images[i + 1];
        }
    }
    Ok(PhiReport {
        dim_source: v.dim(),
        dim_target: w.dim(),
        matrix,
        rank,
        images_in_target,
        fq_linear,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub dim_g: usize,
    pub dim_adjoint: usize,
    /// `Tr_k` maps every root of `g` to a root of `(z·f)^ad`.
    pub images_are_roots: bool,
    pub injective: bool,
}

impl PsiReport {
    pub fn bijective(&self) -> bool {
        self.images_are_roots && self.injective && self.dim_g == self.dim_adjoint
    }
}

/// `t ↦ Tr_k(t)` from the roots of `g(T)` to the roots of `(z·f)^ad(T)`,
/// inside `field`.
pub fn psi_check(params: &TowerParams, z: &FieldElement, field: &Field) -> Result<PsiReport, ShiftError> {
    let needed = params.n() - 1;
    let g = g_poly(params, z)?;
    let zf_ad = adjoint(&f_poly(params, z)?.scale(z)?)?;
    let v = root_space(&g, field)?;
    full_dim(&v, needed)?;
    let w = root_space(&zf_ad, field)?;
    full_dim(&w, needed)?;
    let images: Vec<FieldElement> = v
        .fp_basis()
        .iter()
        .map(|t| trace_value(t, params.e(), params.k()))
        .collect();
    let images_are_roots = images.iter().all(|x| w.contains(x));
    let cols: Vec<Vec<u32>> = images.iter().map(|x| x.coeffs().to_vec()).collect();
    let rank = FpMatrix::from_columns(field.characteristic(), field.degree(), &cols).rank();
    Ok(PsiReport {
        dim_g: v.dim(),
        dim_adjoint: w.dim(),
        images_are_roots,
        injective: rank == images.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitEqReport {
    pub degree_f: usize,
    pub degree_g: usize,
    pub degree_zf_adjoint: usize,
    /// All roots of `f` lie in the splitting field of `g`.
    pub f_splits_in_g_field: bool,
    pub g_splits_in_f_field: bool,
}

impl SplitEqReport {
    pub fn equal(&self) -> bool {
        self.degree_f == self.degree_g && self.f_splits_in_g_field && self.g_splits_in_f_field
    }
}

/// Splitting degrees of `f`, `g` and `(z·f)^ad` over the field of `z`, plus
/// mutual membership of the root spaces.
pub fn splitting_fields_equal(params: &TowerParams, z: &FieldElement, cap: usize) -> Result<SplitEqReport, ShiftError> {
    let f = f_poly(params, z)?;
    let g = g_poly(params, z)?;
    let zf_ad = adjoint(&f.scale(z)?)?;
    let degree_f = splitting_degree(&f, cap)?;
    let degree_g = splitting_degree(&g, cap)?;
    let degree_zf_adjoint = splitting_degree(&zf_ad, cap)?;
    let host = z.field();
    let needed = params.n() - 1;
    let f_splits_in_g_field = root_space(&f, &extension_of(host, degree_g)?)?.dim() == needed;
    let g_splits_in_f_field = root_space(&g, &extension_of(host, degree_f)?)?.dim() == needed;
    Ok(SplitEqReport {
        degree_f,
        degree_g,
        degree_zf_adjoint,
        f_splits_in_g_field,
        g_splits_in_f_field,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::enumerate_field;
    use crate::tower::params_from;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `u` in F_{ℓ^2} with nonzero denominators, and the root spaces of f_i
    /// in its splitting field.
    fn setup(q: u64, n: usize, k: usize, seed: u64) -> (TowerParams, FieldElement, RootSpace) {
        let t = params_from(q, n, k).unwrap();
        let k2 = t.extension(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let u = k2.random(&mut rng);
            if u_data(&t, &u).is_err() || f_i_from_u(&t, &u, Which::Next).is_err() {
                continue;
            }
            let fi = f_i_from_u(&t, &u, Which::Same).unwrap();
            let s = splitting_degree(&fi, 64).unwrap();
            let e = extension_of(&k2, s).unwrap();
            let emb = crate::ff::find_embedding(&k2, &e).unwrap();
            let u = emb.apply(&u).unwrap();
            let v = root_space(&f_i_from_u(&t, &u, Which::Same).unwrap(), &e).unwrap();
            return (t, u, v);
        }
    }

    #[test]
    fn zero_root() {
        let (t, u, _) = setup(2, 3, 1, 1);
        let zero = u.field().zero();
        assert!(prep_identities(&t, &u, &zero).unwrap().passed());
        assert!(shift(&t, &u, &zero).unwrap().is_zero());
    }

    #[test]
    fn harvested_roots_shift_correctly() {
        for (q, n, k, seed) in [(2, 3, 1, 1), (2, 3, 2, 2), (3, 2, 1, 3), (2, 5, 2, 4)] {
            let (t, u, v) = setup(q, n, k, seed);
            assert_eq!(v.dim(), n - 1);
            for s in v.elements() {
                assert!(prep_identities(&t, &u, &s).unwrap().passed());
                ShiftWitness::new(&t, &u, &s).unwrap();
            }
            let phi = phi_matrix(&t, &u, &v).unwrap();
            assert!(phi.bijective() && phi.fq_linear);
            assert_eq!(phi.matrix.rows(), (n - 1) * t.e() as usize);
        }
    }

    #[test]
    fn shift_additive_on_pairs() {
        let (t, u, v) = setup(2, 3, 1, 9);
        let roots = v.elements();
        for a in &roots {
            for b in &roots {
                let sum = shift(&t, &u, &(a + b)).unwrap();
                assert_eq!(sum, &shift(&t, &u, a).unwrap() + &shift(&t, &u, b).unwrap());
            }
        }
    }

    #[test]
    fn perturbed_root_fails() {
        let (t, u, v) = setup(2, 3, 1, 5);
        let one = u.field().one();
        assert!(!v.contains(&one));
        for s in v.elements() {
            let bad = &s + &one;
            assert!(matches!(
                prep_identities(&t, &u, &bad),
                Err(ShiftError::PrecondViolated(_))
            ));
            assert!(!prep_identities_unchecked(&t, &u, &bad).unwrap().trace_relation);
        }
    }

    #[test]
    fn phi_needs_full_root_space() {
        let t = params_from(2, 3, 1).unwrap();
        let k2 = t.extension(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // find a u whose f_i does not split in F_64
        for _ in 0..200 {
            let u = k2.random(&mut rng);
            let Ok(fi) = f_i_from_u(&t, &u, Which::Same) else {
                continue;
            };
            if u_data(&t, &u).is_err() {
                continue;
            }
            let v = root_space(&fi, &k2).unwrap();
            if v.dim() < 2 {
                assert!(matches!(
                    phi_matrix(&t, &u, &v),
                    Err(ShiftError::SplittingTooSmall { .. })
                ));
                return;
            }
        }
        panic!("no non-split specialization found");
    }

    #[test]
    fn psi_at_z_one_231() {
        let t = params_from(2, 3, 1).unwrap();
        let f8 = t.field().unwrap();
        let r = psi_check(&t, &f8.one(), &f8).unwrap();
        assert!(r.bijective());
        let eq = splitting_fields_equal(&t, &f8.one(), 64).unwrap();
        assert_eq!((eq.degree_f, eq.degree_g), (1, 1));
        assert!(eq.equal());
    }

    #[test]
    fn splitting_degrees_agree_over_f9() {
        let t = params_from(3, 2, 1).unwrap();
        let f9 = t.field().unwrap();
        for z in enumerate_field(&f9).unwrap().into_iter().skip(1) {
            let eq = splitting_fields_equal(&t, &z, 64).unwrap();
            assert!(eq.equal(), "z = {z}");
            assert_eq!(eq.degree_f, eq.degree_zf_adjoint);
        }
        let f8 = params_from(2, 3, 1).unwrap().field().unwrap();
        let eq = splitting_fields_equal(&params_from(2, 3, 1).unwrap(), &f8.generator(), 64).unwrap();
        assert!(eq.equal());
    }
}
