use std::sync::Arc;

use dmon::chain::{koszul, sphere, ChainElement};
use dmon::dfunctor::{d_equal, d_twist, phi, DElement, DEquality, DTensor, RSpectrum};
use dmon::perm::Permutation;
use dmon::spectra::{zstar, Presented};
use dmon::symseq::{naive_twist, SymSeq};

const LEVEL: usize = 4;
const STAB: usize = 5;

fn phi_tensor(ab: &Presented, t: &DTensor) -> DElement {
    let mut out = DElement::zero(t.degree);
    for (x, y, c) in t.split_terms() {
        out = out
            .add(&phi(ab, &x, &y).unwrap().scale(c).unwrap())
            .unwrap();
    }
    out
}

/// `Z[*]` against `R(S1)`: generators `e_n` and `e_m ⊗ s`, with `i = n`,
/// `j = m + 1`, so the predicted sign `(-1)^{mi+ij}` is `(-1)^n`.
fn setup() -> (Arc<Presented>, Arc<Presented>, Arc<RSpectrum>) {
    let z = Presented::free(Arc::new(zstar(STAB)));
    let r = Arc::new(RSpectrum::new("S1", &sphere(1), STAB).unwrap());
    let rp = Presented::free(r.spectrum().clone());
    let ab = Presented::bar(&z, &rp, STAB).unwrap();
    let ba = Presented::bar(&rp, &z, STAB).unwrap();
    (ab, ba, r)
}

#[test]
fn twist_square_commutes_with_predicted_sign() {
    let (ab, ba, r) = setup();
    for n in 0..=LEVEL {
        for m in 0..=LEVEL - n {
            let a = DElement::xi(n, &ChainElement::basis(n as i64, 1, 0));
            let b = DElement::xi(m, &r.spectrum().level(m).basis_element(m as i64 + 1, 0));
            let lhs = phi_tensor(&ba, &DTensor::pure(&a, &b).unwrap().twist().unwrap());
            let rhs = d_twist(&ab, &ba, &phi(&ab, &a, &b).unwrap()).unwrap();
            let (i, j) = (n as i64, m as i64 + 1);
            let (nn, mm) = (n as i64, m as i64);
            let iota = phi(&ba, &b, &a)
                .unwrap()
                .scale(koszul(nn * mm + nn * j))
                .unwrap();
            let expected = iota.scale(koszul(mm * i + i * j)).unwrap();
            assert!(matches!(
                d_equal(&ba, &lhs, &rhs, STAB).unwrap(),
                DEquality::EqualAtLevel(_)
            ));
            assert!(
                d_equal(&ba, &lhs, &expected, STAB).unwrap().is_equal(),
                "n = {n}, m = {m}"
            );
            if n % 2 == 1 {
                let flipped = expected.scale(-1).unwrap();
                assert!(
                    !d_equal(&ba, &lhs, &flipped, STAB).unwrap().is_equal(),
                    "the opposite sign must be rejected at n = {n}, m = {m}"
                );
            }
        }
    }
}

#[test]
fn naive_twist_depends_on_representative() {
    let reg = SymSeq::regular_sigma2();
    let x = reg.level(2).basis_element(0, 0);
    let y = reg.level(1).basis_element(0, 0);
    let swap = Permutation::transposition(2, 0);
    let id = Permutation::identity(3);
    let moved = swap.boxed(&Permutation::identity(1)).then(&id);
    let lhs = naive_twist(&reg, &reg, &moved, 2, &x, 1, &y).unwrap();
    let rhs = naive_twist(&reg, &reg, &id, 2, &reg.act(2, &swap, &x).unwrap(), 1, &y).unwrap();
    assert_ne!(lhs, rhs);
}
