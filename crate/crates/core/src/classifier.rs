//! Ulrich bundles on quadrics as direct sums of Ulrich spinor bundles:
//! bigness, numerical dimension, and the enumeration of the non-big ones.
//!
//! Every Ulrich bundle on `Q_n` is `𝒮^a` (odd `n`) or `𝒮'^a ⊕ 𝒮''^b`
//! (even `n`), so a model is a pair of multiplicities.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundles::{BundleClass, BundleError};
use crate::report::{Provenance, VerificationReport};
use crate::spinor::{spinor_rank, Spinor, SpinorEngine, SpinorError, SpinorKind};

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("invalid model on Q_{n}: a = {a}, b = {b}")]
    InvalidModel { n: usize, a: usize, b: usize },
    #[error("r_max = {r_max} is below the spinor rank {rank} on Q_{n}")]
    RankBound { n: usize, r_max: usize, rank: usize },
    #[error("non-big region on Q_{n} is not downward closed at ({a}, {b})")]
    NotDownwardClosed { n: usize, a: usize, b: usize },
    #[error(transparent)]
    Spinor(#[from] SpinorError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

/// Named dimension counts entering the bigness criteria. They are inputs,
/// not computed from Fano schemes.
pub mod facts {
    /// Lines through a general point of `Q_n`.
    pub fn lines_through_point_dim(n: usize) -> u64 {
        n as u64 - 2
    }

    /// `h(𝒮, x)` for a spinor bundle on `Q_n`.
    pub fn spinor_h(n: usize) -> u64 {
        1 << ((n - 3) / 2)
    }

    /// `m`-planes through a point of `Q_{2m}`.
    pub fn quadric_m_planes_dim(m: u64) -> u64 {
        m * (m - 1) / 2
    }

    /// `m`-planes through a point of the Grassmannian of lines in `P^{m+1}`.
    pub const GRASSMANNIAN_M_PLANES_DIM: u64 = 1;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UlrichModel {
    pub n: usize,
    pub a: usize,
    pub b: usize,
}

impl UlrichModel {
    pub fn new(n: usize, a: usize, b: usize) -> Result<UlrichModel, ClassifierError> {
        let m = UlrichModel { n, a, b };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), ClassifierError> {
        let ok = self.n >= 2 && self.a + self.b >= 1 && (self.n % 2 == 0 || self.b == 0);
        if ok {
            Ok(())
        } else {
            Err(ClassifierError::InvalidModel {
                n: self.n,
                a: self.a,
                b: self.b,
            })
        }
    }

    pub fn rank(&self) -> usize {
        (self.a + self.b) * spinor_rank(self.n)
    }

    pub fn is_spinor(&self) -> bool {
        self.a + self.b == 1
    }

    /// `(kind, multiplicity)` of each summand type.
    fn summands(&self) -> Vec<(SpinorKind, usize)> {
        if self.n % 2 == 1 {
            vec![(SpinorKind::S, self.a)]
        } else {
            vec![(SpinorKind::SPrime, self.a), (SpinorKind::SDoublePrime, self.b)]
        }
    }
}

impl fmt::Display for UlrichModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (kind, k) in self.summands() {
            let name = match kind {
                SpinorKind::S => "𝒮",
                SpinorKind::SPrime => "𝒮'",
                SpinorKind::SDoublePrime => "𝒮''",
            };
            match k {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{k}")),
            }
        }
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// Whitney sum of the Ulrich spinor classes making up `model`.
pub fn model_class(engine: &SpinorEngine, model: &UlrichModel) -> Result<BundleClass, ClassifierError> {
    model.validate()?;
    let mut acc: Option<BundleClass> = None;
    for (kind, k) in model.summands() {
        if k == 0 {
            continue;
        }
        let part = engine.chern(model.n, Spinor::ulrich(kind))?.power_sum(k);
        acc = Some(match acc {
            None => part,
            Some(prev) => prev.whitney_sum(&part)?,
        });
    }
    Ok(acc.expect("validated model has a summand"))
}

pub fn nu_of_model(engine: &SpinorEngine, model: &UlrichModel) -> Result<i64, ClassifierError> {
    Ok(model_class(engine, model)?.nu())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub rank: usize,
    pub nu: i64,
    pub big: bool,
    #[serde(with = "witness_json")]
    pub witness: Vec<BigInt>,
}

impl ClassificationRow {
    pub fn model(&self) -> UlrichModel {
        UlrichModel {
            n: self.n,
            a: self.a,
            b: self.b,
        }
    }

    /// `integrate(s_n(E^*))`, the sum of the witness terms.
    pub fn top_segre(&self) -> BigInt {
        self.witness.iter().sum()
    }
}

mod witness_json {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::ring::{serialize_bigint, JsonInt};

    struct Num<'a>(&'a BigInt);

    impl Serialize for Num<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize_bigint(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(Num))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<JsonInt>::deserialize(d)?
            .into_iter()
            .map(JsonInt::into_bigint)
            .collect()
    }
}

/// Evaluates one model. The witness terms are `integrate(s_i(F^*) s_{n-i}(G^*))`
/// for the split `E = F ⊕ G` with `F` a single spinor; for a single spinor the
/// witness is `[integrate(s_n(E^*))]`. Either way the terms sum to `s_n(E^*)`.
pub fn classify_model(engine: &SpinorEngine, model: &UlrichModel) -> Result<ClassificationRow, ClassifierError> {
    let class = model_class(engine, model)?;
    let witness = if model.is_spinor() {
        vec![class.is_big().witness]
    } else {
        let first_kind = if model.n % 2 == 1 {
            SpinorKind::S
        } else if model.a > 0 {
            SpinorKind::SPrime
        } else {
            SpinorKind::SDoublePrime
        };
        let rest = UlrichModel {
            n: model.n,
            a: model.a - usize::from(first_kind != SpinorKind::SDoublePrime),
            b: model.b - usize::from(first_kind == SpinorKind::SDoublePrime),
        };
        let first = engine.chern(model.n, Spinor::ulrich(first_kind))?;
        first
            .sum_big_certificate(&model_class(engine, &rest)?)?
            .terms
    };
    let big = witness.iter().any(Signed::is_positive);
    Ok(ClassificationRow {
        n: model.n,
        a: model.a,
        b: model.b,
        rank: model.rank(),
        nu: class.nu(),
        big,
        witness,
    })
}

/// All models on `Q_n` of rank at most `r_max`, by rank then lexicographic
/// `(a, b)`.
pub fn models_up_to(n: usize, r_max: usize) -> Vec<UlrichModel> {
    let k_max = r_max / spinor_rank(n);
    let mut out = Vec::new();
    for k in 1..=k_max {
        if n % 2 == 1 {
            out.push(UlrichModel { n, a: k, b: 0 });
        } else {
            for a in 0..=k {
                out.push(UlrichModel { n, a, b: k - a });
            }
        }
    }
    out
}

/// Evaluates every model of rank at most `r_max` (in parallel; output order
/// is that of [`models_up_to`]).
pub fn classify_all(engine: &SpinorEngine, n: usize, r_max: usize) -> Result<Vec<ClassificationRow>, ClassifierError> {
    let rank = spinor_rank(n);
    if r_max < rank {
        return Err(ClassifierError::RankBound { n, r_max, rank });
    }
    // warm the cache so workers only read
    for &kind in crate::spinor::kinds_for(n) {
        engine.chern(n, Spinor::ulrich(kind))?;
    }
    models_up_to(n, r_max)
        .par_iter()
        .map(|m| classify_model(engine, m))
        .collect()
}

/// The non-big models of rank at most `r_max`. Fails if the non-big region is
/// not closed under removing a summand, which a direct sum with a big
/// summand being big guarantees.
pub fn classify_nonbig(engine: &SpinorEngine, n: usize, r_max: usize) -> Result<Vec<ClassificationRow>, ClassifierError> {
    let rows = classify_all(engine, n, r_max)?;
    let nonbig: std::collections::HashSet<(usize, usize)> =
        rows.iter().filter(|r| !r.big).map(|r| (r.a, r.b)).collect();
    for &(a, b) in &nonbig {
        let below = [(a.wrapping_sub(1), b), (a, b.wrapping_sub(1))];
        for (x, y) in below {
            if x == usize::MAX || y == usize::MAX || x + y == 0 {
                continue;
            }
            if !nonbig.contains(&(x, y)) {
                return Err(ClassifierError::NotDownwardClosed { n, a, b });
            }
        }
    }
    Ok(rows.into_iter().filter(|r| !r.big).collect())
}

/// On `Q_2` every `𝒮'^a` and `𝒮''^b` is non-big, so any enumeration is a
/// truncation of an infinite family.
pub fn boundary_pattern(n: usize) -> Option<&'static str> {
    (n == 2).then_some("non-big iff a = 0 or b = 0, for every rank")
}

/// The expected non-big models on `Q_n` for `2 <= n <= 10` with at most
/// `k_max` spinor summands.
pub fn table1_expected(n: usize, k_max: usize) -> Option<Vec<(usize, usize)>> {
    let fixed: &[(usize, usize)] = match n {
        2 => {
            let mut out = Vec::new();
            for k in 1..=k_max {
                out.push((0, k));
                out.push((k, 0));
            }
            return Some(out);
        }
        3 | 5 => &[(1, 0)],
        4 => &[(0, 1), (1, 0), (1, 1)],
        6 => &[(0, 1), (1, 0), (0, 2), (2, 0)],
        7..=9 => &[],
        10 => &[(0, 1), (1, 0)],
        _ => return None,
    };
    Some(fixed.iter().copied().filter(|&(a, b)| a + b <= k_max).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineCriterion {
    pub n: usize,
    /// `dim F_1(Q_n, x) + h(𝒮, x)`.
    pub lhs: u64,
    /// The spinor rank.
    pub rhs: u64,
    pub forces_big: bool,
}

/// A non-big spinor on `Q_n` would need `(n - 2) + 2^{⌊(n-3)/2⌋} >= 2^{⌊(n-1)/2⌋}`;
/// when this fails the spinors are big.
pub fn line_criterion(n: usize) -> LineCriterion {
    assert!(n >= 3, "line criterion needs n >= 3");
    let lhs = facts::lines_through_point_dim(n) + facts::spinor_h(n);
    let rhs = spinor_rank(n) as u64;
    LineCriterion {
        n,
        lhs,
        rhs,
        forces_big: lhs < rhs,
    }
}

pub fn line_criterion_forces_big(n: usize) -> bool {
    line_criterion(n).forces_big
}

/// `(2m)! / (m! (m+1)!)`, the degree entering the Grassmannian case.
pub fn catalan(m: u64) -> BigInt {
    crate::bundles::binomial(2 * m, m) / BigInt::from(m + 1)
}

/// The two integer checks closing the low numerical dimension classification:
/// `m(m-1)/2 >= 2^{m-1} - 1` only for `m` in {2, 3}, and `m + 1 = 2d - 1`
/// never for `m >= 3`.
pub fn theorem2_case_checks(m_max: u64) -> VerificationReport {
    let mut report = VerificationReport::new("theorem2-cases");
    for m in 2..=m_max {
        let lhs = facts::quadric_m_planes_dim(m);
        let rhs = (1u64 << (m - 1)) - 1;
        let holds = lhs >= rhs;
        let expected = m == 2 || m == 3;
        report.record(
            format!("quadric m={m}: {lhs} >= {rhs}"),
            Provenance::Published,
            expected,
            holds,
            holds == expected,
        );
    }
    for m in 3..=m_max {
        let d = catalan(m);
        let two_d_minus_one = &d * 2 - 1;
        let solved = two_d_minus_one == BigInt::from(m + 1);
        report.record(
            format!("grassmannian m={m}: d={d}, 2d-1={two_d_minus_one} vs m+1={}", m + 1),
            Provenance::Published,
            false,
            solved,
            !solved,
        );
    }
    report
}

/// Compares [`classify_nonbig`] with the expected non-big sets for
/// `n_lo..=n_hi`, using `k_max` spinor ranks as the bound at each `n`.
/// Dimensions at least 11 must come out empty.
pub fn table1_report(
    engine: &SpinorEngine,
    n_lo: usize,
    n_hi: usize,
    k_max: usize,
) -> Result<VerificationReport, ClassifierError> {
    let mut report = VerificationReport::new("table1");
    for n in n_lo..=n_hi {
        let rows = classify_nonbig(engine, n, k_max * spinor_rank(n))?;
        let mut got: Vec<(usize, usize)> = rows.iter().map(|r| (r.a, r.b)).collect();
        got.sort_unstable();
        let mut expected = table1_expected(n, k_max).unwrap_or_default();
        expected.sort_unstable();
        report.compare(
            format!("n={n}"),
            Provenance::Published,
            fmt_pairs(&expected),
            fmt_pairs(&got),
        );
        for r in &rows {
            let max = (n + r.rank - 1) as i64;
            let expected_nu = if r.model().is_spinor() {
                engine.nu_table(n, n)?[0].nu
            } else {
                max - 1
            };
            report.record(
                format!("n={n} ({},{}) nu", r.a, r.b),
                Provenance::Published,
                expected_nu,
                r.nu,
                r.nu == expected_nu && r.nu < max && r.top_segre().is_zero(),
            );
        }
    }
    Ok(report)
}

fn fmt_pairs(pairs: &[(usize, usize)]) -> String {
    let items: Vec<String> = pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
    format!("{{{}}}", items.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CohClass;
    use crate::spinor::default_engine;

    fn nonbig_set(n: usize, r_max: usize) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = classify_nonbig(default_engine(), n, r_max)
            .unwrap()
            .iter()
            .map(|r| (r.a, r.b))
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn small_quadrics() {
        assert_eq!(nonbig_set(4, 8), vec![(0, 1), (1, 0), (1, 1)]);
        assert_eq!(nonbig_set(6, 16), vec![(0, 1), (0, 2), (1, 0), (2, 0)]);
        assert!(nonbig_set(7, 32).is_empty());
        assert!(nonbig_set(11, 64).is_empty());
        assert_eq!(
            nonbig_set(2, 5),
            vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0)]
        );
    }

    #[test]
    fn model_classes() {
        let e = model_class(default_engine(), &UlrichModel::new(4, 1, 1).unwrap()).unwrap();
        assert_eq!(e.rank(), 4);
        let h = CohClass::hyperplane(e.ring());
        assert_eq!(e.c(1), h.scale(&BigInt::from(2)));
        let r = 3;
        let e = model_class(default_engine(), &UlrichModel::new(2, r, 0).unwrap()).unwrap();
        let (l, _) = CohClass::middle_classes(e.ring()).unwrap();
        assert_eq!(e.rank(), r);
        assert_eq!(e.c(1), l.scale(&BigInt::from(r)));
    }

    #[test]
    fn nu_values() {
        let eng = default_engine();
        assert_eq!(nu_of_model(eng, &UlrichModel::new(4, 1, 1).unwrap()).unwrap(), 6);
        assert_eq!(nu_of_model(eng, &UlrichModel::new(10, 1, 0).unwrap()).unwrap(), 24);
        let big = UlrichModel::new(5, 2, 0).unwrap();
        assert_eq!(nu_of_model(eng, &big).unwrap(), (5 + big.rank() - 1) as i64);
    }

    #[test]
    fn invalid_models() {
        assert!(UlrichModel::new(5, 1, 1).is_err());
        assert!(UlrichModel::new(4, 0, 0).is_err());
        assert!(matches!(
            classify_nonbig(default_engine(), 8, 4),
            Err(ClassifierError::RankBound { .. })
        ));
    }

    #[test]
    fn line_criterion_boundary() {
        assert!(line_criterion_forces_big(11));
        let c = line_criterion(11);
        assert_eq!((c.lhs, c.rhs), (25, 32));
        assert!(!line_criterion_forces_big(10));
        assert_eq!(line_criterion(10).lhs, 16);
        assert!(!line_criterion_forces_big(3));
        assert!(line_criterion_forces_big(9));
        assert!(!line_criterion_forces_big(8));
    }

    #[test]
    fn theorem2_cases() {
        let r = theorem2_case_checks(12);
        assert!(r.pass, "{}", r.to_markdown());
        assert_eq!(catalan(3), BigInt::from(5));
    }

    #[test]
    fn row_json_schema() {
        let row = classify_model(default_engine(), &UlrichModel::new(4, 1, 1).unwrap()).unwrap();
        let json = serde_json::to_string(&row).unwrap();
        assert_eq!(
            json,
            r#"{"n":4,"a":1,"b":1,"rank":4,"nu":6,"big":false,"witness":[0,0,0,0,0]}"#
        );
        let back: ClassificationRow = serde_json::from_str(&json).unwrap();
        assert_eq!(back, row);
    }

    #[test]
    fn display_names() {
        assert_eq!(UlrichModel::new(6, 2, 0).unwrap().to_string(), "𝒮'^2");
        assert_eq!(UlrichModel::new(4, 1, 1).unwrap().to_string(), "𝒮' ⊕ 𝒮''");
    }
}
