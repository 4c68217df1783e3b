//! Prime-field scalars and dense polynomials over F_p.
//!
//! Polynomials are coefficient vectors, constant term first, with no
//! trailing zeros (the zero polynomial is the empty vector).

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` as `p^e` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

#[inline]
pub(crate) fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn inv(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p as u64 - 2, p)
}

pub(crate) fn pow(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, p)`.
pub(crate) fn from_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

pub(crate) fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = sub(x, y, p);
    }
    trim(&mut out);
    out
}

pub(crate) fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += x as u64 * y as u64;
        }
        // keep the accumulator well clear of overflow for large p
        if i % 1024 == 1023 {
            acc.iter_mut().for_each(|c| *c %= p as u64);
        }
    }
    let mut out: Vec<u32> = acc.into_iter().map(|c| (c % p as u64) as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub(crate) fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    assert!(!m.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv(m[dm], p);
    let terms: Vec<(usize, u32)> = m[..dm]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect();
    while r.len() > dm {
        let d = r.len() - 1;
        let c = mul(r[d], lead_inv, p);
        r[d] = 0;
        let shift = d - dm;
        for &(i, mi) in &terms {
            r[shift + i] = sub(r[shift + i], mul(c, mi, p), p);
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd.
pub(crate) fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = inv(lead, p);
        x.iter_mut().for_each(|c| *c = mul(*c, li, p));
    }
    x
}

/// Inverse of `a` modulo the irreducible `m`, by extended Euclid.
pub(crate) fn poly_inv_mod(a: &[u32], m: &[u32], p: u32) -> Option<Vec<u32>> {
    let mut r0 = m.to_vec();
    let mut r1 = poly_rem(a, m, p);
    let mut s0: Vec<u32> = Vec::new();
    let mut s1: Vec<u32> = vec![1];
    while !r1.is_empty() {
        let (quo, rem) = poly_divmod(&r0, &r1, p);
        let s2 = poly_sub(&s0, &poly_mul(&quo, &s1, p), p);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is the gcd, a nonzero constant when a is invertible
    if r0.len() != 1 {
        return None;
    }
    let c = inv(r0[0], p);
    let mut out: Vec<u32> = s0.iter().map(|&x| mul(x, c, p)).collect();
    out = poly_rem(&out, m, p);
    Some(out)
}

pub(crate) fn poly_divmod(a: &[u32], m: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    assert!(!m.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - dm];
    let lead_inv = inv(m[dm], p);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = mul(r[d], lead_inv, p);
        let shift = d - dm;
        q[shift] = c;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = sub(r[shift + i], mul(c, mi, p), p);
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// `g(x)^p mod m` for `g` over F_p, using `g^p = g(x^p)`.
fn pth_power_mod(g: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut spread = vec![0; (g.len().max(1) - 1) * p as usize + 1];
    for (i, &c) in g.iter().enumerate() {
        spread[i * p as usize] = c;
    }
    poly_rem(&spread, m, p)
}

/// Ben-Or irreducibility test for a monic polynomial over F_p.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0, 1];
    let mut g = x.clone();
    for _ in 0..deg / 2 {
        g = pth_power_mod(&g, f, p);
        let diff = poly_sub(&g, &x, p);
        if poly_gcd(f, &diff, p).len() != 1 {
            return false;
        }
    }
    true
}

/// The smallest monic irreducible polynomial of degree `m` over F_p.
///
/// Candidates `T^m + c_{m-1}T^{m-1} + ... + c_0` are ordered by the integer
/// `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`, the same order used for field
/// elements.
pub(crate) fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    let mut low = vec![0u32; m];
    loop {
        let mut f = low.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // odometer increment, c_0 least significant
        let mut i = 0;
        loop {
            assert!(i < m, "no irreducible polynomial of degree {m} over F_{p}");
            low[i] += 1;
            if low[i] == p {
                low[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
    }

    #[test]
    fn irreducible_search_small_cases() {
        assert_eq!(smallest_irreducible(2, 1), vec![0, 1]);
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 4), vec![1, 1, 0, 0, 1]);
    }

    /// Brute-force irreducibility: no monic factor of degree 1..=deg/2.
    fn irreducible_by_trial(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        for d in 1..=deg / 2 {
            let count = (p as usize).pow(d as u32);
            for idx in 0..count {
                let mut g: Vec<u32> = (0..d)
                    .map(|i| ((idx / (p as usize).pow(i as u32)) % p as usize) as u32)
                    .collect();
                g.push(1);
                if poly_rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn ben_or_agrees_with_trial_division() {
        for (p, m) in [(2u32, 5usize), (2, 6), (3, 3), (3, 4), (5, 3)] {
            let count = (p as usize).pow(m as u32);
            for idx in 0..count {
                let mut f: Vec<u32> = (0..m)
                    .map(|i| ((idx / (p as usize).pow(i as u32)) % p as usize) as u32)
                    .collect();
                f.push(1);
                assert_eq!(is_irreducible(&f, p), irreducible_by_trial(&f, p), "{f:?} mod {p}");
            }
        }
    }

    #[test]
    fn inverse_mod_irreducible() {
        let m = vec![1, 1, 0, 1];
        for idx in 1..8u32 {
            let a: Vec<u32> = {
                let mut v = vec![idx & 1, (idx >> 1) & 1, (idx >> 2) & 1];
                trim(&mut v);
                v
            };
            let ai = poly_inv_mod(&a, &m, 2).unwrap();
            assert_eq!(poly_rem(&poly_mul(&a, &ai, 2), &m, 2), vec![1]);
        }
    }
}
