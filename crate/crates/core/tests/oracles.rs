mod common;

use num_bigint::BigInt;

use common::*;
use ulrich_core::bundles::twisted_forms;
use ulrich_core::products::{bott_cohomology, is_ulrich_split, Atom, BoxBundle, BoxSummand};
use ulrich_core::ring::{restrict_to_linear, CohClass, Family, Ring};
use ulrich_core::spinor::{default_engine, Spinor, SpinorKind};
use ulrich_core::BundleClass;

fn ints(v: Vec<i128>) -> Vec<BigInt> {
    v.into_iter().map(BigInt::from).collect()
}

#[test]
fn twisted_forms_against_splitting_principle() {
    for m in 1..=5usize {
        for p in 0..=m {
            for t in -6..=6i64 {
                let e = twisted_forms(m, p, t).unwrap();
                let got: Vec<BigInt> = (0..=m)
                    .map(|k| e.chern().coeff(e.ring().monomial(&[k]).unwrap()).clone())
                    .collect();
                assert_eq!(got, ints(splitting_forms_chern(m, p, t).coeffs), "m={m} p={p} t={t}");
            }
        }
    }
}

#[test]
fn cotangent_of_plane() {
    // 0 -> Ω(1) -> O^3 -> O(1) -> 0
    let e = twisted_forms(2, 1, 1).unwrap();
    let h = CohClass::hyperplane(e.ring());
    assert_eq!(e.rank(), 2);
    assert_eq!(e.chern(), &(&(&CohClass::one(e.ring()) - &h) + &h.pow(2)));
}

#[test]
fn bott_against_long_exact_sequences() {
    for m in 2..=3usize {
        for p in 0..=m {
            for t in -(m as i64) - 4..=m as i64 + 3 {
                assert_eq!(bott_cohomology(m, p, t).unwrap(), ints(les_cohomology(m, p, t)), "m={m} p={p} t={t}");
            }
        }
    }
}

#[test]
fn bott_on_the_line() {
    for p in 0..=1usize {
        for t in -6..=6i64 {
            assert_eq!(bott_cohomology(1, p, t).unwrap(), ints(line_cohomology(1, t - 2 * p as i64)));
        }
    }
}

#[test]
fn koszul_sections_match_euler_characteristic() {
    // for t > p the forms have only sections, so h^0 equals the Euler characteristic
    for m in 2..=5usize {
        for p in 0..=m {
            for t in p as i64 + 1..=6 {
                let chi: i128 = (0..=p)
                    .map(|j| {
                        let sign = if (p - j) % 2 == 0 { 1 } else { -1 };
                        sign * choose(m as i128 + 1, j as i128) * line_cohomology(m, t - j as i64)[0]
                    })
                    .sum();
                assert_eq!(koszul_h0(m, p, t), chi, "m={m} p={p} t={t}");
            }
        }
    }
}

#[test]
fn spinor_on_two_dimensional_quadric_is_a_ruling() {
    // Q_2 = P^1 x P^1 and S'(1) is a pullback of O(1) from one ruling
    let s = default_engine().chern(2, Spinor::ulrich(SpinorKind::SPrime)).unwrap();
    assert_eq!(s.rank(), 1);
    let (l, lp) = CohClass::middle_classes(s.ring()).unwrap();
    assert!(s.c(1) == l || s.c(1) == lp);
    let e = BoxBundle::new(
        vec![1, 1],
        vec![BoxSummand {
            atoms: vec![Atom::line(1), Atom::line(0)],
            multiplicity: 1,
        }],
    )
    .unwrap();
    assert!(is_ulrich_split(&e).unwrap().ulrich);
    assert_eq!(e.chern().unwrap().c(1).pow(2).integrate(), (&s.c(1) * &s.c(1)).integrate());
}

#[test]
fn spinor_restrictions_to_linear_spaces() {
    // on a maximal linear space of one family the spinor bundle splits into
    // twisted forms, so its Chern class is a product of the corresponding classes
    let eng = default_engine();
    for m in 1..=6usize {
        let n = 2 * m;
        for kind in [SpinorKind::SPrime, SpinorKind::SDoublePrime] {
            let s = eng.chern(n, Spinor::plain(kind)).unwrap();
            for fam in [Family::First, Family::Second] {
                let r = restrict_to_linear(s.chern(), fam).unwrap();
                let ring = r.ring().clone();
                let parity = usize::from((kind == SpinorKind::SPrime) != (fam == Family::Second));
                let mut want = CohClass::one(&ring);
                let mut rank = 0;
                for p in (0..=m).filter(|p| p % 2 == parity) {
                    let f = twisted_forms(m, p, p as i64).unwrap();
                    rank += f.rank();
                    let coeffs: Vec<(String, BigInt)> = (0..=m)
                        .map(|k| (ring.key(ring.monomial(&[k]).unwrap()), f.chern().coeff(f.ring().monomial(&[k]).unwrap()).clone()))
                        .collect();
                    want = &want * &CohClass::from_terms(&ring, coeffs).unwrap();
                }
                assert_eq!(rank, s.rank(), "n={n} {kind:?} {fam:?}");
                assert_eq!(r, want, "n={n} {kind:?} {fam:?}");
            }
        }
    }
}

#[test]
fn segre_of_projective_space_tangent() {
    // s(T_{P^m}) = (1 + h)^{-(m+1)}, so s_k(T) = (-1)^k C(m + k, k)
    for m in 1..=8usize {
        let ring = Ring::multi(&[m]).unwrap();
        let h = CohClass::hyperplane(&ring);
        let t = BundleClass::new(m, (&CohClass::one(&ring) + &h).pow(m + 1)).unwrap();
        let s = t.segre();
        for k in 0..=m {
            let want = choose((m + k) as i128, k as i128) * if k % 2 == 0 { 1 } else { -1 };
            assert_eq!((&s.component(k) * &h.pow(m - k)).integrate(), BigInt::from(want));
        }
    }
}
