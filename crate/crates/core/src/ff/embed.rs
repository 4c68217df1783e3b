//! Embeddings `F_{p^m} -> F_{p^M}` for `m | M`.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use super::{fp, FfError, Field, FieldElement, FieldId};
use crate::poly::Poly;

/// Ring homomorphism determined by the image of the source generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    generator_image: FieldElement,
    /// Images of the power basis `1, α, ..., α^{m-1}`.
    basis_images: Arc<Vec<FieldElement>>,
}

static EMBEDDINGS: LazyLock<Mutex<HashMap<(FieldId, FieldId), Embedding>>> = LazyLock::new(Default::default);

/// The embedding sending the source generator to the smallest (in
/// enumeration order) root of the source modulus in the target.
pub fn find_embedding(src: &Field, tgt: &Field) -> Result<Embedding, FfError> {
    if src.characteristic() != tgt.characteristic() || !tgt.degree().is_multiple_of(src.degree()) {
        return Err(FfError::IncompatibleFields(src.id(), tgt.id()));
    }
    let key = (src.id(), tgt.id());
    if let Some(e) = EMBEDDINGS.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let image = if src == tgt {
        src.generator()
    } else {
        smallest_root_of_modulus(src, tgt)
    };
    let mut basis = Vec::with_capacity(src.degree());
    let mut cur = tgt.one();
    for _ in 0..src.degree() {
        basis.push(cur.clone());
        cur = &cur * &image;
    }
    let emb = Embedding {
        source: src.clone(),
        target: tgt.clone(),
        generator_image: image,
        basis_images: Arc::new(basis),
    };
    EMBEDDINGS.lock().unwrap().insert(key, emb.clone());
    Ok(emb)
}

impl Embedding {
    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn generator_image(&self) -> &FieldElement {
        &self.generator_image
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, a: &FieldElement) -> Result<FieldElement, FfError> {
        if a.field() != &self.source {
            return Err(FfError::FieldMismatch(self.source.id(), a.field().id()));
        }
        if self.is_identity() {
            return Ok(a.clone());
        }
        let p = self.target.characteristic();
        let mut acc = vec![0u32; self.target.degree()];
        for (&c, img) in a.coeffs().iter().zip(self.basis_images.iter()) {
            if c == 0 {
                continue;
            }
            for (slot, &x) in acc.iter_mut().zip(img.coeffs()) {
                *slot = fp::add(*slot, fp::mul(c, x, p), p);
            }
        }
        self.target.from_coeffs(&acc)
    }
}

fn lift(field: &Field, coeffs: &[u32]) -> Poly {
    let elems = coeffs.iter().map(|&c| field.from_int(c as i64)).collect();
    Poly::new(field, elems).expect("coefficients built in the same field")
}

/// All roots of the (irreducible, F_p-rational) source modulus lie in the
/// target. They are separated by the F_p-valued maps `x -> Tr(βx)` for β
/// running over the target's power basis, which jointly separate points.
fn smallest_root_of_modulus(src: &Field, tgt: &Field) -> FieldElement {
    let p = src.characteristic();
    let modulus = src.modulus();
    let m = src.degree();
    if m == 1 {
        return tgt.from_int(fp::sub(0, modulus[0], p) as i64);
    }
    let big_p = lift(tgt, modulus);
    // X^{p^i} mod P over F_p; periodic with period m since P is irreducible
    let mut x_pows: Vec<Poly> = Vec::with_capacity(m);
    let mut cur: Vec<u32> = vec![0, 1];
    for _ in 0..m {
        x_pows.push(lift(tgt, &cur));
        let mut spread = vec![0; (cur.len().max(1) - 1) * p as usize + 1];
        for (i, &c) in cur.iter().enumerate() {
            spread[i * p as usize] = c;
        }
        cur = fp::poly_rem(&spread, modulus, p);
    }
    let mut factors = vec![big_p.monic()];
    let mut beta = tgt.one();
    let alpha = tgt.generator();
    for _ in 0..tgt.degree() {
        if factors.iter().all(|f| f.degree() == Some(1)) {
            break;
        }
        // Tr(βX) mod P = Σ_i β^{p^i} X^{p^i}
        let mut trace = Poly::zero(tgt);
        let mut b = beta.clone();
        for i in 0..tgt.degree() {
            trace = trace.add(&x_pows[i % m].scale(&b));
            b = b.frobenius(1);
        }
        let mut next = Vec::new();
        for f in factors {
            if f.degree() == Some(1) {
                next.push(f);
                continue;
            }
            let t = trace.rem(&f);
            for c in 0..p {
                let g = f.gcd(&t.sub(&Poly::constant(tgt.from_int(c as i64))));
                if g.degree().unwrap_or(0) >= 1 {
                    next.push(g);
                }
            }
        }
        factors = next;
        beta = &beta * &alpha;
    }
    assert!(
        factors.len() == m && factors.iter().all(|f| f.degree() == Some(1)),
        "modulus of {src} failed to split in {tgt}"
    );
    factors
        .iter()
        .map(|f| -&f.coeffs()[0])
        .min()
        .expect("at least one root")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{enumerate_field, make_field};

    fn brute_force_image(src: &Field, tgt: &Field) -> FieldElement {
        let modulus = lift(tgt, src.modulus());
        modulus.roots_by_sweep().unwrap().into_iter().min().unwrap()
    }

    #[test]
    fn identity_embedding() {
        let f = make_field(3, 2).unwrap();
        let e = find_embedding(&f, &f).unwrap();
        assert!(e.is_identity());
        let x = &f.generator() + &f.one();
        assert_eq!(e.apply(&x).unwrap(), x);
    }

    #[test]
    fn prime_field_into_f8() {
        let f2 = make_field(2, 1).unwrap();
        let f8 = make_field(2, 3).unwrap();
        let e = find_embedding(&f2, &f8).unwrap();
        assert!(e.apply(&f2.one()).unwrap().is_one());
        assert!(e.apply(&f2.zero()).unwrap().is_zero());
    }

    #[test]
    fn f4_into_f16_has_order_three() {
        let f4 = make_field(2, 2).unwrap();
        let f16 = make_field(2, 4).unwrap();
        let e = find_embedding(&f4, &f16).unwrap();
        let g = e.generator_image();
        assert!(!g.is_one());
        assert!(g.pow(3).is_one());
        let m = lift(&f16, f4.modulus());
        assert!(m.eval(g).is_zero());
    }

    #[test]
    fn matches_brute_force_and_is_homomorphic() {
        for (p, m, big) in [
            (2u64, 2usize, 6usize),
            (2, 3, 6),
            (3, 2, 4),
            (2, 4, 8),
            (5, 2, 4),
            (3, 3, 6),
        ] {
            let src = make_field(p, m).unwrap();
            let tgt = make_field(p, big).unwrap();
            let e = find_embedding(&src, &tgt).unwrap();
            assert_eq!(e.generator_image(), &brute_force_image(&src, &tgt));
            let elems = enumerate_field(&src).unwrap();
            for x in &elems {
                for y in elems.iter().step_by(3) {
                    assert_eq!(e.apply(&(x + y)).unwrap(), &e.apply(x).unwrap() + &e.apply(y).unwrap());
                    assert_eq!(e.apply(&(x * y)).unwrap(), &e.apply(x).unwrap() * &e.apply(y).unwrap());
                }
            }
        }
    }

    #[test]
    fn incompatible() {
        let f8 = make_field(2, 3).unwrap();
        let f16 = make_field(2, 4).unwrap();
        let f9 = make_field(3, 2).unwrap();
        assert!(matches!(
            find_embedding(&f8, &f16),
            Err(FfError::IncompatibleFields(..))
        ));
        assert!(matches!(
            find_embedding(&f9, &f16),
            Err(FfError::IncompatibleFields(..))
        ));
    }

    #[test]
    fn large_target() {
        let src = make_field(3, 4).unwrap();
        let tgt = make_field(3, 104).unwrap();
        let e = find_embedding(&src, &tgt).unwrap();
        let g = e.generator_image();
        assert!(lift(&tgt, src.modulus()).eval(g).is_zero());
        let x = &src.generator().pow(7) + &src.one();
        let y = src.generator().pow(30);
        assert_eq!(
            e.apply(&(&x * &y)).unwrap(),
            &e.apply(&x).unwrap() * &e.apply(&y).unwrap()
        );
    }
}
