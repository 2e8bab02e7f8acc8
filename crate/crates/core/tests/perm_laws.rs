use dmon::chain::koszul;
use dmon::perm::{
    complete, compose, rho, shuffle_decompose, shuffles, twist, Injection, Permutation,
};
use proptest::prelude::*;

fn perm(max: usize) -> impl Strategy<Value = Permutation> {
    (0..=max)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn perm_of(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn sign_is_multiplicative((p, q) in (0usize..=7).prop_flat_map(|n| (perm_of(n), perm_of(n)))) {
        prop_assert_eq!(p.then(&q).sign(), p.sign() * q.sign());
    }

    #[test]
    fn inverse_cancels(p in perm(7)) {
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(p.inverse().sign(), p.sign());
    }

    // θ = (α □ β) then shuffle, with the shuffle increasing on both blocks
    #[test]
    fn shuffle_decomposition_roundtrips(
        (theta, n) in (0usize..=7).prop_flat_map(|t| (perm_of(t), 0..=t))
    ) {
        let m = theta.len() - n;
        let f = shuffle_decompose(&theta, n, m).unwrap();
        prop_assert!(f.shuffle.is_shuffle_of(&[n, m]));
        prop_assert_eq!(f.left.boxed(&f.right).then(&f.shuffle), theta);
    }

    #[test]
    fn completion_restricts_to_injection((n, extra, seed) in (0usize..=4, 0usize..=3, any::<u64>())) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let alpha = Injection::random(&mut rng, n, n + extra).unwrap();
        let c = complete(&alpha);
        prop_assert_eq!(compose(&rho(n, n + extra).unwrap(), &c.as_injection()).unwrap(), alpha);
    }
}

#[test]
fn twist_signature_table() {
    for m in 0..=6 {
        for n in 0..=6 {
            assert_eq!(twist(m, n).sign(), koszul((m * n) as i64), "τ^{{{m},{n}}}");
            assert!(twist(m, n).is_shuffle_of(&[m, n]));
        }
    }
}

#[test]
fn shuffles_are_coset_representatives() {
    let sh = shuffles(2, 2);
    assert_eq!(sh.len(), 6);
    let mut seen = std::collections::BTreeSet::new();
    for theta in Permutation::all(4) {
        seen.insert(
            shuffle_decompose(&theta, 2, 2)
                .unwrap()
                .shuffle
                .images()
                .to_vec(),
        );
    }
    assert_eq!(seen.len(), 6);
}
