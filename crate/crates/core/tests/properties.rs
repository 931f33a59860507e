use conjugate_codes::conjugate_pair::{expand_pair, make_pair, ConjugatePair};
use conjugate_codes::crypto_scheme::SchemeInstance;
use conjugate_codes::linear_codes::{is_subcode, LinearCode, VectorFq};
use conjugate_codes::quantum_sim::{commutation_check, PauliChannel};
use conjugate_codes::symplectic::{css_lift, symp_form, SympVector};
use conjugate_codes::{Field, XDist};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field_params() -> impl Strategy<Value = (u32, u32)> {
    prop::sample::select(vec![(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
}

fn field_with_elements(count: usize) -> impl Strategy<Value = (Field, Vec<u32>)> {
    field_params().prop_flat_map(move |(p, m)| {
        let q = p.pow(m);
        (Just(Field::new(p, m).unwrap()), prop::collection::vec(0..q, count))
    })
}

fn small_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2, 1), (3, 1), (2, 2)]).prop_map(|(p, m)| Field::new(p, m).unwrap())
}

/// A field, a length and a list of generator rows.
fn code_strategy(max_n: usize) -> impl Strategy<Value = LinearCode> {
    (small_field(), 1..=max_n).prop_flat_map(|(f, n)| {
        let q = f.q();
        prop::collection::vec(prop::collection::vec(0..q, n), 0..=n)
            .prop_map(move |rows| LinearCode::from_generators(&f, n, &rows).unwrap())
    })
}

/// `C2` random; `C1` spanned by `C2^⊥` and extra random rows.
fn pair_strategy(max_n: usize) -> impl Strategy<Value = ConjugatePair> {
    (code_strategy(max_n), any::<u64>()).prop_map(|(c2, seed)| {
        use rand::Rng;
        let f = c2.field().clone();
        let n = c2.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows: Vec<Vec<u32>> =
            c2.dual().generator().row_vectors().into_iter().map(VectorFq::into_entries).collect();
        for _ in 0..rng.random_range(0..=n) {
            rows.push((0..n).map(|_| rng.random_range(0..f.q())).collect());
        }
        let c1 = LinearCode::from_generators(&f, n, &rows).unwrap();
        make_pair(c1, c2).unwrap()
    })
}

fn symp_vectors(count: usize) -> impl Strategy<Value = Vec<SympVector>> {
    (small_field(), 1..=4usize).prop_flat_map(move |(f, n)| {
        let q = f.q();
        prop::collection::vec(prop::collection::vec(0..q, 2 * n), count).prop_map(move |vs| {
            vs.into_iter()
                .map(|v| SympVector::from_interleaved(&VectorFq::new(&f, v).unwrap()).unwrap())
                .collect()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms((f, xs) in field_with_elements(3)) {
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.mul(f.div(b, a).unwrap(), a), b);
        }
        prop_assert_eq!(f.pow(a, f.q() as u64), a);
    }

    #[test]
    fn trace_is_prime_linear((f, xs) in field_with_elements(3)) {
        let (a, b) = (xs[0], xs[1]);
        let c = xs[2] % f.p();
        let p = f.p();
        prop_assert!(f.trace(a) < p);
        prop_assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % p);
        prop_assert_eq!(f.trace(f.scale_prime(c, a)), c * f.trace(a) % p);
        prop_assert_eq!(f.trace(f.pow(a, p as u64)), f.trace(a));
    }

    #[test]
    fn dual_is_an_involution(c in code_strategy(5)) {
        let d = c.dual();
        prop_assert_eq!(c.k() + d.k(), c.n());
        prop_assert_eq!(d.dual(), c.clone());
        for g in c.generator().row_vectors() {
            for h in d.generator().row_vectors() {
                prop_assert!(g.dot(&h).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn generator_choice_does_not_change_the_code(c in code_strategy(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows: Vec<Vec<u32>> = (0..c.k() + 2).map(|_| c.random_codeword(&mut rng).into_entries()).collect();
        rows.extend(c.generator().row_vectors().into_iter().map(VectorFq::into_entries));
        rows.reverse();
        let again = LinearCode::from_generators(c.field(), c.n(), &rows).unwrap();
        prop_assert_eq!(again, c);
    }

    #[test]
    fn symplectic_form_is_bilinear_and_alternating(vs in symp_vectors(3)) {
        let (a, b, c) = (&vs[0], &vs[1], &vs[2]);
        let f = a.field().clone();
        let form = |x: &SympVector, y: &SympVector| symp_form(x, y).unwrap().value();
        prop_assert_eq!(form(a, a), 0);
        prop_assert_eq!(form(a, b), f.neg(form(b, a)));
        prop_assert_eq!(form(&a.add(b).unwrap(), c), f.add(form(a, c), form(b, c)));
    }

    #[test]
    fn commutation_phase_is_the_traced_form(vs in symp_vectors(2)) {
        let e = commutation_check(&vs[0], &vs[1]).unwrap();
        let f = vs[0].field();
        prop_assert_eq!(e, f.trace(symp_form(&vs[0], &vs[1]).unwrap().value()));
    }

    #[test]
    fn css_lift_is_dual_containing(pair in pair_strategy(4)) {
        let lift = css_lift(&pair);
        prop_assert!(lift.l.is_dual_containing());
        prop_assert_eq!(lift.l.dim() + lift.lperp.dim(), 2 * pair.n());
        prop_assert_eq!(lift.l.dim() - lift.lperp.dim(), 2 * pair.k());
    }

    #[test]
    fn expansion_keeps_pairs_conjugate(pair in pair_strategy(3)) {
        let e = expand_pair(&pair).unwrap();
        let m = pair.field().m() as usize;
        prop_assert!(e.field().is_prime_field());
        prop_assert_eq!(e.n(), m * pair.n());
        prop_assert_eq!(e.k(), m * pair.k());
        prop_assert!(is_subcode(e.c2_dual(), e.c1()).unwrap());
    }

    /// Any X error of the form `leader + w` with `w ∈ C2^⊥` is absorbed, for
    /// every key and message.
    #[test]
    fn enlarged_errors_decrypt(pair in pair_strategy(4), seed in any::<u64>()) {
        use rand::Rng;
        let s = SchemeInstance::new(&pair).unwrap().with_x_dist(XDist::Uniform).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reps = s.messages().representatives();
        let leaders = s.t1().leaders();
        for _ in 0..8 {
            let v = &reps[rng.random_range(0..reps.len())];
            let (x, sent) = s.encrypt(v, &mut rng).unwrap();
            let u = leaders[rng.random_range(0..leaders.len())]
                .add(&pair.c2_dual().random_codeword(&mut rng))
                .unwrap();
            prop_assert!(s.enlarged_error_set().contains_x(&u));
            prop_assert_eq!(&s.decrypt(&x, &sent.add(&u).unwrap()).unwrap(), v);
        }
    }

    /// Failure probability does not depend on the key or the message.
    #[test]
    fn failure_probability_is_key_independent(pair in pair_strategy(4), p in 0.0f64..0.5) {
        use conjugate_codes::crypto_scheme::error_probabilities;
        let ch = PauliChannel::depolarizing(pair.field(), pair.n(), p).unwrap();
        let base = SchemeInstance::new(&pair).unwrap();
        let reference = error_probabilities(&base, &ch).unwrap();
        let f = pair.field().clone();
        for x in base.t1().leaders().into_iter().take(4) {
            let s = base.clone().with_x_dist(XDist::Fixed(x.clone())).unwrap();
            let v = s.messages().representatives().pop().unwrap();
            let sent = x.add(&v).unwrap();
            let mut fail = 0.0;
            ch.for_each_x_marginal(|u, pu| {
                let r = sent.add(&VectorFq::new(&f, u.to_vec()).unwrap()).unwrap();
                if s.decrypt(&x, &r).unwrap() != v {
                    fail += pu;
                }
            }).unwrap();
            prop_assert!((fail - reference.p_xi_out).abs() < 1e-12);
        }
    }
}
