//! Chern/Segre calculus for formal vector-bundle classes.
//!
//! A [`BundleClass`] is a rank together with a total Chern class. The Segre
//! class is the multiplicative inverse `s(E) c(E) = 1`, so that for the dual
//! `s_i(E^*) = (-1)^i s_i(E)`.
//!
//! `nu`, `is_big` and `sum_big_certificate` read geometric meaning off Chern
//! data only for globally generated (hence nef) bundles. That hypothesis
//! cannot be checked from the class; it is the caller's responsibility.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ring::{pullback_from_factor, CoeffMap, CohClass, RawCoeffs, Ring, RingDescriptor, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("total Chern class must have constant term 1")]
    BadConstantTerm,
    #[error("c_{degree} is nonzero but exceeds the rank {rank}")]
    AboveRank { degree: usize, rank: usize },
    #[error("twisting class must be homogeneous of codegree 1")]
    NotADivisor,
    #[error("Segre index {index} out of range 0..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("certificate term {index} is negative ({value}); the inputs cannot both be globally generated")]
    NegativeCertificateTerm { index: usize, value: BigInt },
    #[error("form degree {p} out of range 0..={m}")]
    FormDegree { p: usize, m: usize },
}

/// Rank and total Chern class of a (formal) vector bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleClass {
    rank: usize,
    chern: CohClass,
}

impl BundleClass {
    pub fn new(rank: usize, chern: CohClass) -> Result<BundleClass, BundleError> {
        if chern.component(0) != CohClass::one(chern.ring()) {
            return Err(BundleError::BadConstantTerm);
        }
        if let Some(top) = chern.top_codegree() {
            if top > rank {
                return Err(BundleError::AboveRank { degree: top, rank });
            }
        }
        Ok(BundleClass { rank, chern })
    }

    pub fn trivial(ring: &Arc<Ring>, rank: usize) -> BundleClass {
        BundleClass {
            rank,
            chern: CohClass::one(ring),
        }
    }

    /// The line bundle with first Chern class `c1`.
    pub fn line(c1: &CohClass) -> Result<BundleClass, BundleError> {
        if !c1.is_homogeneous(1) {
            return Err(BundleError::NotADivisor);
        }
        Ok(BundleClass {
            rank: 1,
            chern: &CohClass::one(c1.ring()) + c1,
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.chern.ring()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn chern(&self) -> &CohClass {
        &self.chern
    }

    /// `c_i(E)`.
    pub fn c(&self, i: usize) -> CohClass {
        self.chern.component(i)
    }

    pub fn dim(&self) -> usize {
        self.ring().dim()
    }

    pub fn dual(&self) -> BundleClass {
        BundleClass {
            rank: self.rank,
            chern: alternate(&self.chern),
        }
    }

    /// `E ⊗ L` for the line bundle `L` with `c_1(L) = lambda`:
    /// `c_k(E ⊗ L) = sum_i C(r-i, k-i) c_i(E) lambda^{k-i}`.
    pub fn twist(&self, lambda: &CohClass) -> Result<BundleClass, BundleError> {
        self.chern.same_ring(lambda)?;
        if !lambda.is_homogeneous(1) {
            return Err(BundleError::NotADivisor);
        }
        let n = self.dim();
        let r = self.rank;
        let powers: Vec<CohClass> = std::iter::successors(Some(CohClass::one(self.ring())), |p| {
            Some(p * lambda)
        })
        .take(n + 1)
        .collect();
        let parts: Vec<CohClass> = (0..=n.min(r)).map(|i| self.c(i)).collect();
        let mut out = CohClass::zero(self.ring());
        for k in 0..=n.min(r) {
            for (i, ci) in parts.iter().enumerate().take(k + 1) {
                if ci.is_zero() {
                    continue;
                }
                let b = binomial((r - i) as u64, (k - i) as u64);
                if b.is_zero() {
                    continue;
                }
                out += &(ci * &powers[k - i]).scale(&b);
            }
        }
        Ok(BundleClass {
            rank: r,
            chern: out,
        })
    }

    /// `E ⊕ F`: ranks add, Chern classes multiply.
    pub fn whitney_sum(&self, other: &BundleClass) -> Result<BundleClass, BundleError> {
        Ok(BundleClass {
            rank: self.rank + other.rank,
            chern: self.chern.checked_mul(&other.chern)?,
        })
    }

    /// `E^{⊕k}`.
    pub fn power_sum(&self, k: usize) -> BundleClass {
        BundleClass {
            rank: self.rank * k,
            chern: self.chern.pow(k),
        }
    }

    pub fn segre(&self) -> CohClass {
        invert_unit(&self.chern)
    }

    /// `s_i(E^*) = (-1)^i s_i(E)`.
    pub fn segre_dual(&self, i: usize) -> Result<CohClass, BundleError> {
        let dim = self.dim();
        if i > dim {
            return Err(BundleError::IndexOutOfRange { index: i, dim });
        }
        let s = self.segre().component(i);
        Ok(if i % 2 == 0 { s } else { -&s })
    }

    /// Numerical dimension `r - 1 + max{k : s_k(E) != 0}` of a globally
    /// generated bundle.
    pub fn nu(&self) -> i64 {
        let s = self.segre();
        let top = s.top_codegree().unwrap_or(0);
        self.rank as i64 - 1 + top as i64
    }

    /// Bigness of a globally generated bundle: `integrate(s_n(E^*)) > 0`.
    pub fn is_big(&self) -> BigVerdict {
        let witness = self
            .segre_dual(self.dim())
            .expect("top index is in range")
            .integrate();
        BigVerdict {
            big: witness.is_positive(),
            witness,
        }
    }

    /// The terms `integrate(s_i(E^*) s_{n-i}(F^*))` deciding bigness of
    /// `E ⊕ F` for globally generated `E`, `F`. All terms must be
    /// nonnegative; a negative term is reported as an error.
    pub fn sum_big_certificate(&self, other: &BundleClass) -> Result<SumCertificate, BundleError> {
        self.chern.same_ring(&other.chern)?;
        let n = self.dim();
        let mut terms = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let t = self.segre_dual(i)?.checked_mul(&other.segre_dual(n - i)?)?.integrate();
            if t.is_negative() {
                return Err(BundleError::NegativeCertificateTerm { index: i, value: t });
            }
            terms.push(t);
        }
        Ok(SumCertificate {
            big: terms.iter().any(Signed::is_positive),
            terms,
        })
    }

    /// Pullback along the projection onto factor `j` of a product.
    pub fn pullback(&self, target: &Arc<Ring>, j: usize) -> Result<BundleClass, BundleError> {
        Ok(BundleClass {
            rank: self.rank,
            chern: pullback_from_factor(&self.chern, target, j)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BigVerdict {
    pub big: bool,
    #[serde(serialize_with = "crate::ring::serialize_bigint")]
    pub witness: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumCertificate {
    pub big: bool,
    pub terms: Vec<BigInt>,
}

impl SumCertificate {
    pub fn total(&self) -> BigInt {
        self.terms.iter().sum()
    }
}

/// Negates odd-codegree components.
fn alternate(x: &CohClass) -> CohClass {
    let mut out = CohClass::zero(x.ring());
    for d in 0..=x.ring().dim() {
        let part = x.component(d);
        if d % 2 == 0 {
            out += &part;
        } else {
            out += &-&part;
        }
    }
    out
}

/// Inverse of a class with constant term 1, solved degree by degree.
pub(crate) fn invert_unit(c: &CohClass) -> CohClass {
    let ring = c.ring();
    let n = ring.dim();
    let parts: Vec<CohClass> = (0..=n).map(|d| c.component(d)).collect();
    let mut s: Vec<CohClass> = Vec::with_capacity(n + 1);
    s.push(CohClass::one(ring));
    for k in 1..=n {
        let mut acc = CohClass::zero(ring);
        for i in 1..=k {
            if parts[i].is_zero() || s[k - i].is_zero() {
                continue;
            }
            acc += &(&parts[i] * &s[k - i]);
        }
        s.push(-&acc);
    }
    let mut out = CohClass::zero(ring);
    for part in &s {
        out += part;
    }
    out
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Chern class of `Ω^p_{P^m}(t)`, rank `C(m, p)`, built from the Koszul
/// sequences `0 -> Ω^p(p) -> Λ^p V ⊗ O -> Ω^{p-1}(p) -> 0`.
pub fn twisted_forms(m: usize, p: usize, t: i64) -> Result<BundleClass, BundleError> {
    if p > m {
        return Err(BundleError::FormDegree { p, m });
    }
    let ring = Ring::with_max_dim(RingDescriptor::multi(&[m]), m.max(crate::ring::DEFAULT_MAX_DIM))?;
    let hyper = CohClass::hyperplane(&ring);
    // Ω^0(0) = O
    let mut current = BundleClass::trivial(&ring, 1);
    for q in 1..=p {
        // c(Ω^q(q)) = c(Ω^{q-1}(q))^{-1}
        let prev_twisted = current.twist(&hyper)?;
        current = BundleClass {
            rank: binomial(m as u64, q as u64).try_into().expect("rank fits usize"),
            chern: invert_unit(prev_twisted.chern()),
        };
    }
    let shift = t - p as i64;
    current.twist(&hyper.scale(&BigInt::from(shift)))
}

impl Serialize for BundleClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("ring", self.ring().descriptor())?;
        map.serialize_entry("rank", &self.rank)?;
        map.serialize_entry("chern", &CoeffMap(&self.chern))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for BundleClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            ring: RingDescriptor,
            rank: usize,
            chern: RawCoeffs,
        }
        let raw = Raw::deserialize(d)?;
        let ring = Ring::new(raw.ring).map_err(D::Error::custom)?;
        let chern = raw.chern.into_class(&ring)?;
        BundleClass::new(raw.rank, chern).map_err(D::Error::custom)
    }
}
