#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use ulrich_core::ring::{CohClass, Ring, RingDescriptor};
use ulrich_core::BundleClass;

pub fn ring_descriptors() -> impl Strategy<Value = RingDescriptor> {
    prop_oneof![
        (2usize..=12).prop_map(RingDescriptor::quadric),
        prop::collection::vec(1usize..=4, 1..=3)
            .prop_filter("total dimension at most 12", |d| d.iter().sum::<usize>() <= 12)
            .prop_map(|d| RingDescriptor::multi(&d)),
    ]
}

pub fn rings() -> impl Strategy<Value = Arc<Ring>> {
    ring_descriptors().prop_map(|d| Ring::new(d).expect("valid descriptor"))
}

pub fn even_quadrics() -> impl Strategy<Value = Arc<Ring>> {
    (1usize..=6).prop_map(|m| Ring::quadric(2 * m).unwrap())
}

pub fn class_in(ring: Arc<Ring>, bound: i64) -> impl Strategy<Value = CohClass> {
    let rank = ring.rank();
    prop::collection::vec(-bound..=bound, rank).prop_map(move |v| {
        let terms: Vec<(String, BigInt)> = v
            .into_iter()
            .enumerate()
            .map(|(i, c)| (ring.key(i), BigInt::from(c)))
            .collect();
        CohClass::from_terms(&ring, terms).unwrap()
    })
}

pub fn classes(k: usize, bound: i64) -> impl Strategy<Value = Vec<CohClass>> {
    rings().prop_flat_map(move |r| prop::collection::vec(class_in(r, bound), k))
}

/// Codegree-one class.
pub fn divisor_in(ring: Arc<Ring>, bound: i64) -> impl Strategy<Value = CohClass> {
    class_in(ring, bound).prop_map(|x| x.component(1))
}

/// A formal bundle class of rank `0..=6` with small Chern classes.
pub fn bundle_in(ring: Arc<Ring>, bound: i64) -> impl Strategy<Value = BundleClass> {
    (0usize..=6, class_in(ring.clone(), bound)).prop_map(move |(r, x)| {
        let mut c = CohClass::one(&ring);
        for d in 1..=r.min(ring.dim()) {
            c += &x.component(d);
        }
        BundleClass::new(r, c).unwrap()
    })
}

pub fn bundles(k: usize, bound: i64) -> impl Strategy<Value = (Vec<BundleClass>, CohClass, CohClass)> {
    rings().prop_flat_map(move |r| {
        (
            prop::collection::vec(bundle_in(r.clone(), bound), k),
            divisor_in(r.clone(), bound),
            divisor_in(r, bound),
        )
    })
}

/// Truncated polynomials in one variable, `coeffs[k]` at `h^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trunc {
    pub coeffs: Vec<i128>,
}

impl Trunc {
    pub fn one(m: usize) -> Trunc {
        let mut coeffs = vec![0; m + 1];
        coeffs[0] = 1;
        Trunc { coeffs }
    }

    pub fn linear(m: usize, a: i128) -> Trunc {
        let mut t = Trunc::one(m);
        if m >= 1 {
            t.coeffs[1] = a;
        }
        t
    }

    pub fn mul(&self, other: &Trunc) -> Trunc {
        let m = self.coeffs.len() - 1;
        let mut out = vec![0; m + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate().take(m + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Trunc { coeffs: out }
    }

    /// Inverse of a unit with constant term 1.
    pub fn inverse(&self) -> Trunc {
        let m = self.coeffs.len() - 1;
        let mut s = vec![0i128; m + 1];
        s[0] = 1;
        for k in 1..=m {
            s[k] = -(1..=k).map(|i| self.coeffs[i] * s[k - i]).sum::<i128>();
        }
        Trunc { coeffs: s }
    }

    pub fn pow(&self, e: i64) -> Trunc {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Trunc::one(self.coeffs.len() - 1);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

pub fn choose(n: i128, k: i128) -> i128 {
    if k < 0 || n < k || n < 0 {
        return 0;
    }
    let mut acc = 1i128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `c(Ω^p(t))` on `P^m` by the splitting principle applied to the Koszul
/// resolution `Ω^p = Σ_j (-1)^{p-j} Λ^j V ⊗ O(-j)` in K-theory.
pub fn splitting_forms_chern(m: usize, p: usize, t: i64) -> Trunc {
    let mut acc = Trunc::one(m);
    for j in 0..=p {
        let mult = choose(m as i128 + 1, j as i128) as i64;
        let sign = if (p - j) % 2 == 0 { 1 } else { -1 };
        let factor = Trunc::linear(m, (t - j as i64) as i128);
        acc = acc.mul(&factor.pow(sign * mult));
    }
    acc
}

/// Line bundle cohomology on `P^m`.
pub fn line_cohomology(m: usize, s: i64) -> Vec<i128> {
    let mut out = vec![0i128; m + 1];
    let m_i = m as i128;
    let s = s as i128;
    if s >= 0 {
        out[0] = choose(s + m_i, m_i);
    }
    if s <= -m_i - 1 {
        out[m] += choose(-s - 1, m_i);
    }
    out
}

/// `h^0(Ω^p(t))` for `t >= 1` as the kernel dimension in the exact Koszul
/// complex of global sections `Λ^j V ⊗ S_{t-j}`.
pub fn koszul_h0(m: usize, p: usize, t: i64) -> i128 {
    let m_i = m as i128;
    (p + 1..=m + 1)
        .map(|j| {
            let sign = if (j - p - 1) % 2 == 0 { 1 } else { -1 };
            let s = t as i128 - j as i128;
            let dim = if s >= 0 { choose(s + m_i, m_i) } else { 0 };
            sign * choose(m_i + 1, j as i128) * dim
        })
        .sum()
}

/// Cohomology of `Ω^p(t)` on `P^m`, `m >= 2`, by induction on `p` through
/// the long exact sequence of `0 -> Ω^p(t) -> Λ^p V ⊗ O(t-p) -> Ω^{p-1}(t) -> 0`.
/// The only non-formal input is `h^0`, taken from [`koszul_h0`] for `t >= 1`
/// and from the inclusion into `Λ^p V ⊗ O(t - p)` for `t <= 0`.
pub fn les_cohomology(m: usize, p: usize, t: i64) -> Vec<i128> {
    assert!(m >= 2);
    if p == 0 {
        return line_cohomology(m, t);
    }
    let prev = les_cohomology(m, p - 1, t);
    let n_lambda = choose(m as i128 + 1, p as i128);
    let lb: Vec<i128> = line_cohomology(m, t - p as i64).iter().map(|v| v * n_lambda).collect();
    let mut out = vec![0i128; m + 1];
    // t <= 0: Λ^p V ⊗ O(t-p) has no sections when p >= 1
    out[0] = if t >= 1 { koszul_h0(m, p, t) } else { 0 };
    // 0 -> H^0(Ω^p) -> H^0(L) -> H^0(Ω^{p-1}) -> H^1(Ω^p) -> H^1(L) = 0
    out[1] = prev[0] - lb[0] + out[0];
    for q in 2..m {
        // H^{q-1}(L) = H^q(L) = 0
        out[q] = prev[q - 1];
    }
    // 0 -> H^{m-1}(Ω^{p-1}) -> H^m(Ω^p) -> H^m(L) -> H^m(Ω^{p-1}) -> 0
    out[m] = prev[m - 1] + lb[m] - prev[m];
    out
}
