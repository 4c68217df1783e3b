use galtower::ff::{enumerate_field, find_embedding, make_field, Field, FieldElement};
use galtower::linpoly::{extension_of, lin_compose, root_space, splitting_degree, trace_poly, LinearizedPoly, QBase};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// (q, host degree over F_p) pairs; every host contains F_q and has at most 2^12 elements.
const HOSTS: [(u64, usize); 7] = [(2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (4, 4), (9, 4)];

fn setup(idx: usize) -> (QBase, Field) {
    let (q, m) = HOSTS[idx];
    let base = QBase::new(q).unwrap();
    (base, make_field(base.p() as u64, m).unwrap())
}

fn random_poly(base: QBase, host: &Field, t: usize, rng: &mut ChaCha8Rng) -> LinearizedPoly {
    let mut coeffs: Vec<FieldElement> = (0..=t).map(|_| host.random(rng)).collect();
    coeffs[0] = host.random_nonzero(rng);
    coeffs[t] = host.random_nonzero(rng);
    LinearizedPoly::new(base, host, coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn adjoint_has_same_splitting_degree(t in 1usize..=3, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for idx in 0..HOSTS.len() {
            let (base, host) = setup(idx);
            let h = random_poly(base, &host, t, &mut rng);
            let ad = h.adjoint().unwrap();
            // Frobenius acts on the t-dimensional root space, so its order is at most q^t − 1
            let cap = (base.q().pow(t as u32) - 1) as usize;
            prop_assert_eq!(splitting_degree(&h, cap).unwrap(), splitting_degree(&ad, cap).unwrap(), "{}", h);
        }
    }

    #[test]
    fn double_adjoint_roots_are_frobenius_images(idx in 0..HOSTS.len(), t in 1usize..=2, seed: u64) {
        let (base, host) = setup(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_poly(base, &host, t, &mut rng);
        let hh = h.adjoint().unwrap().adjoint().unwrap();
        let cap = (base.q().pow(t as u32) - 1) as usize;
        let big = extension_of(&host, splitting_degree(&h, cap).unwrap()).unwrap();
        let e = base.e();
        let mut images: Vec<FieldElement> =
            root_space(&h, &big).unwrap().elements().iter().map(|r| r.q_power(e, t as u64)).collect();
        images.sort();
        prop_assert_eq!(root_space(&hh, &big).unwrap().elements(), images);
    }

    #[test]
    fn root_count_is_a_power_of_q(idx in 0..HOSTS.len(), t in 1usize..=3, seed: u64) {
        let (base, host) = setup(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_poly(base, &host, t, &mut rng);
        let swept = enumerate_field(&host).unwrap().into_iter().filter(|a| h.eval(a).unwrap().is_zero()).count() as u64;
        let v = root_space(&h, &host).unwrap();
        prop_assert_eq!(swept, base.q().pow(v.dim() as u32));
        prop_assert_eq!(swept, v.cardinality());
    }

    #[test]
    fn eval_is_fq_linear(idx in 0..HOSTS.len(), t in 1usize..=4, seed: u64) {
        let (base, host) = setup(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_poly(base, &host, t, &mut rng);
        let emb = find_embedding(&base.field(), &host).unwrap();
        let lambda = emb.apply(&base.field().random(&mut rng)).unwrap();
        let (a, b) = (host.random(&mut rng), host.random(&mut rng));
        prop_assert_eq!(h.eval(&(&a + &b)).unwrap(), &h.eval(&a).unwrap() + &h.eval(&b).unwrap());
        prop_assert_eq!(h.eval(&(&lambda * &a)).unwrap(), &lambda * &h.eval(&a).unwrap());
    }

    #[test]
    fn fq_coefficient_polys_commute(q in prop::sample::select(vec![2u64, 3, 4, 5, 9]), t1 in 0usize..=4, t2 in 0usize..=4, seed: u64) {
        let base = QBase::new(q).unwrap();
        let fq = base.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h1 = random_poly(base, &fq, t1, &mut rng);
        let h2 = random_poly(base, &fq, t2, &mut rng);
        prop_assert_eq!(lin_compose(&h1, &h2).unwrap(), lin_compose(&h2, &h1).unwrap());
    }

    #[test]
    fn composition_is_evaluation(idx in 0..HOSTS.len(), seed: u64) {
        let (base, host) = setup(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h1 = random_poly(base, &host, 2, &mut rng);
        let h2 = random_poly(base, &host, 1, &mut rng);
        let a = host.random(&mut rng);
        prop_assert_eq!(lin_compose(&h1, &h2).unwrap().eval(&a).unwrap(), h1.eval(&h2.eval(&a).unwrap()).unwrap());
    }

    #[test]
    fn embeddings_are_homomorphisms(idx in 0..HOSTS.len(), r in 2usize..=3, seed: u64) {
        let (_, host) = setup(idx);
        let big = make_field(host.characteristic() as u64, host.degree() * r).unwrap();
        let emb = find_embedding(&host, &big).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (host.random(&mut rng), host.random(&mut rng));
        prop_assert_eq!(emb.apply(&(&a + &b)).unwrap(), &emb.apply(&a).unwrap() + &emb.apply(&b).unwrap());
        prop_assert_eq!(emb.apply(&(&a * &b)).unwrap(), &emb.apply(&a).unwrap() * &emb.apply(&b).unwrap());
    }
}

#[test]
fn trace_polys_split_and_commute() {
    for q in [2u64, 3, 4, 5, 9] {
        let base = QBase::new(q).unwrap();
        let fq = base.field();
        let tr = |i| trace_poly(i, base, &fq).unwrap();
        for i in 1..=6 {
            for j in 1..=6 {
                if j < i {
                    assert_eq!(
                        tr(i),
                        tr(i - j).add(&tr(j).q_shift(i - j)).unwrap(),
                        "q={q} i={i} j={j}"
                    );
                }
                assert_eq!(
                    lin_compose(&tr(i), &tr(j)).unwrap(),
                    lin_compose(&tr(j), &tr(i)).unwrap()
                );
            }
        }
    }
}

#[test]
fn fields_are_canonical_and_enumerations_distinct() {
    for (p, m) in [(2u64, 12usize), (3, 7), (5, 5), (7, 4), (2, 1)] {
        let f = make_field(p, m).unwrap();
        assert_eq!(f.modulus(), make_field(p, m).unwrap().modulus());
        let all = enumerate_field(&f).unwrap();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len() as u64, p.pow(m as u32));
        let size = p.pow(m as u32);
        assert!(all.iter().all(|a| &a.pow(size) == a));
    }
}
