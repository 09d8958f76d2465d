//! Split bundles on products of projective spaces: cohomology by the Bott
//! formula and Künneth, the Ulrich vanishing test, and two deduction
//! pipelines on `P^1 x P^{n-1}` and `P^2 x P^2`.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundles::{binomial, twisted_forms, BundleClass, BundleError};
use crate::ring::{CohClass, Ring, RingError};

#[derive(Debug, Error)]
pub enum ProductsError {
    #[error("form degree p = {p} exceeds factor dimension {m}")]
    FormDegree { p: usize, m: usize },
    #[error("box bundle is malformed: {0}")]
    Malformed(String),
    #[error("parameters out of range: {0}")]
    Range(String),
    #[error("deduction failed: {0}")]
    Deduction(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `h^q(P^m, Ω^p(t))` for `q = 0..=m`, by the Bott formula.
pub fn bott_cohomology(m: usize, p: usize, t: i64) -> Result<Vec<BigInt>, ProductsError> {
    if p > m {
        return Err(ProductsError::FormDegree { p, m });
    }
    let mut out = vec![BigInt::zero(); m + 1];
    out[0] = bott_h0(m, p, t);
    for (q, slot) in out.iter_mut().enumerate().take(m).skip(1) {
        if t == 0 && q == p {
            *slot = BigInt::one();
        }
    }
    if m > 0 {
        // Serre duality: H^m(Ω^p(t)) = H^0(Ω^{m-p}(-t))^*
        out[m] += bott_h0(m, m - p, -t);
    }
    Ok(out)
}

fn bott_h0(m: usize, p: usize, t: i64) -> BigInt {
    if t == 0 && p == 0 {
        return BigInt::one();
    }
    if t <= p as i64 {
        return BigInt::zero();
    }
    let t = t as u64;
    let (m, p) = (m as u64, p as u64);
    binomial(t + m - p, t) * binomial(t - 1, p)
}

/// `Ω^p(t)` on one factor; `p = 0` is the line bundle `O(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub p: usize,
    pub t: i64,
}

impl Atom {
    pub fn line(t: i64) -> Atom {
        Atom { p: 0, t }
    }

    pub fn forms(p: usize, t: i64) -> Atom {
        Atom { p, t }
    }

    /// `T_{P^m}(-1)`, stored as `Ω^{m-1}(m)`.
    pub fn tangent_minus_one(m: usize) -> Atom {
        Atom {
            p: m - 1,
            t: m as i64,
        }
    }

    pub fn rank(&self, m: usize) -> usize {
        binomial(m as u64, self.p as u64)
            .to_usize()
            .expect("rank fits usize")
    }

    fn is_line(&self, m: usize) -> bool {
        self.p == 0 || self.p == m
    }

    fn shifted(&self, s: i64) -> Atom {
        Atom {
            p: self.p,
            t: self.t + s,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "O({})", self.t)
        } else {
            write!(f, "Ω^{}({})", self.p, self.t)
        }
    }
}

/// A box product of atoms, one per factor, with a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSummand {
    pub atoms: Vec<Atom>,
    pub multiplicity: usize,
}

/// A direct sum of box products on `P^{a_1} x ... x P^{a_k}`, polarized by
/// `O(1, ..., 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxBundle {
    pub dims: Vec<usize>,
    pub summands: Vec<BoxSummand>,
}

impl fmt::Display for BoxBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| {
                let body: Vec<String> = s.atoms.iter().map(Atom::to_string).collect();
                let body = body.join(" ⊠ ");
                if s.multiplicity == 1 {
                    format!("[{body}]")
                } else {
                    format!("[{body}]^{}", s.multiplicity)
                }
            })
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// Cohomology of `E(-s)` in every degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistCohomology {
    pub twist: usize,
    pub dims: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UlrichReport {
    pub ulrich: bool,
    pub twists: Vec<TwistCohomology>,
}

impl UlrichReport {
    /// `(twist, degree, dimension)` of every nonvanishing slot.
    pub fn failures(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for tc in &self.twists {
            for (q, &d) in tc.dims.iter().enumerate() {
                if d != 0 {
                    out.push((tc.twist, q, d));
                }
            }
        }
        out
    }
}

impl BoxBundle {
    pub fn new(dims: Vec<usize>, summands: Vec<BoxSummand>) -> Result<BoxBundle, ProductsError> {
        let b = BoxBundle { dims, summands };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), ProductsError> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(ProductsError::Malformed("factor dimensions must be positive".into()));
        }
        if self.summands.is_empty() {
            return Err(ProductsError::Malformed("no summands".into()));
        }
        for s in &self.summands {
            if s.atoms.len() != self.dims.len() {
                return Err(ProductsError::Malformed(format!(
                    "summand has {} atoms for {} factors",
                    s.atoms.len(),
                    self.dims.len()
                )));
            }
            for (a, &m) in s.atoms.iter().zip(&self.dims) {
                if a.p > m {
                    return Err(ProductsError::FormDegree { p: a.p, m });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn rank(&self) -> usize {
        self.summands
            .iter()
            .map(|s| {
                s.multiplicity
                    * s.atoms
                        .iter()
                        .zip(&self.dims)
                        .map(|(a, &m)| a.rank(m))
                        .product::<usize>()
            })
            .sum()
    }

    /// `h^q(E ⊗ O(s, ..., s))` for `q = 0..=dim`, by Künneth.
    pub fn cohomology(&self, s: i64) -> Result<Vec<BigInt>, ProductsError> {
        let mut total = vec![BigInt::zero(); self.dim() + 1];
        for summand in &self.summands {
            let mut acc = vec![BigInt::one()];
            for (atom, &m) in summand.atoms.iter().zip(&self.dims) {
                let a = atom.shifted(s);
                let factor = bott_cohomology(m, a.p, a.t)?;
                acc = convolve(&acc, &factor);
            }
            for (q, v) in acc.into_iter().enumerate() {
                total[q] += v * summand.multiplicity;
            }
        }
        Ok(total)
    }

    pub fn h0(&self) -> Result<BigInt, ProductsError> {
        Ok(self.cohomology(0)?.swap_remove(0))
    }

    /// Chern class on the product ring. Each summand may have at most one
    /// atom that is not a line bundle.
    pub fn chern(&self) -> Result<BundleClass, ProductsError> {
        self.validate()?;
        let ring = Ring::multi(&self.dims)?;
        let mut acc = BundleClass::trivial(&ring, 0);
        for summand in &self.summands {
            let mut line = CohClass::zero(&ring);
            let mut core: Option<BundleClass> = None;
            for (j, (atom, &m)) in summand.atoms.iter().zip(&self.dims).enumerate() {
                let gen = CohClass::factor_generator(&ring, j)?;
                if atom.is_line(m) {
                    // Ω^m(t) = O(t - m - 1)
                    let degree = if atom.p == 0 { atom.t } else { atom.t - m as i64 - 1 };
                    line += &gen.scale(&BigInt::from(degree));
                } else if core.is_none() {
                    core = Some(twisted_forms(m, atom.p, atom.t)?.pullback(&ring, j)?);
                } else {
                    return Err(ProductsError::Malformed(
                        "more than one higher-rank atom in a summand".into(),
                    ));
                }
            }
            let part = match core {
                Some(b) => b.twist(&line)?,
                None => BundleClass::line(&line)?,
            };
            acc = acc.whitney_sum(&part.power_sum(summand.multiplicity))?;
        }
        Ok(acc)
    }
}

fn convolve(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Checks `H^q(E(-s)) = 0` for all `q` and `1 <= s <= dim`.
pub fn is_ulrich_split(e: &BoxBundle) -> Result<UlrichReport, ProductsError> {
    e.validate()?;
    let mut twists = Vec::new();
    for s in 1..=e.dim() {
        let dims = e
            .cohomology(-(s as i64))?
            .iter()
            .map(|d| d.to_u64().expect("cohomology dimension fits u64"))
            .collect();
        twists.push(TwistCohomology { twist: s, dims });
    }
    let ulrich = twists.iter().all(|t| t.dims.iter().all(|&d| d == 0));
    Ok(UlrichReport { ulrich, twists })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeductionStep {
    pub step: String,
    pub equation: String,
    pub outcome: String,
    pub pass: bool,
}

/// An ordered chain of computed steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeductionRecord {
    pub name: String,
    pub steps: Vec<DeductionStep>,
    pub pass: bool,
}

impl DeductionRecord {
    pub fn new(name: impl Into<String>) -> DeductionRecord {
        DeductionRecord {
            name: name.into(),
            steps: Vec::new(),
            pass: true,
        }
    }

    pub fn push(
        &mut self,
        step: impl Into<String>,
        equation: impl Into<String>,
        outcome: impl Into<String>,
        pass: bool,
    ) {
        self.pass &= pass;
        self.steps.push(DeductionStep {
            step: step.into(),
            equation: equation.into(),
            outcome: outcome.into(),
            pass,
        });
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "## {}: {}\n\n| step | equation | outcome | result |\n|---|---|---|---|\n",
            self.name,
            if self.pass { "PASS" } else { "FAIL" }
        );
        for s in &self.steps {
            out.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                s.step,
                s.equation,
                s.outcome,
                if s.pass { "pass" } else { "FAIL" }
            ));
        }
        out
    }
}

/// `[O(n-2) ⊠ T(-1)] ⊕ [O(n-1) ⊠ O]^{r-n+1}` on `P^1 x P^{n-1}`.
pub fn example43_bundle(n: usize, r: usize) -> Result<BoxBundle, ProductsError> {
    if n < 3 || r + 1 < n {
        return Err(ProductsError::Range(format!("need n >= 3 and r >= n - 1, got n = {n}, r = {r}")));
    }
    let m = n - 1;
    let mut summands = vec![BoxSummand {
        atoms: vec![Atom::line(n as i64 - 2), Atom::tangent_minus_one(m)],
        multiplicity: 1,
    }];
    if r > m {
        summands.push(BoxSummand {
            atoms: vec![Atom::line(n as i64 - 1), Atom::line(0)],
            multiplicity: r - m,
        });
    }
    BoxBundle::new(vec![1, m], summands)
}

/// Certifies that the bundle of [`example43_bundle`] is Ulrich, has
/// `c_1^n > 0`, and has numerical dimension `r + 1`.
pub fn example43_pipeline(n: usize, r: usize) -> Result<DeductionRecord, ProductsError> {
    let e = example43_bundle(n, r)?;
    let mut rec = DeductionRecord::new(format!("example-un n={n} r={r}"));
    rec.push("bundle", e.to_string(), format!("rank {}", e.rank()), e.rank() == r);

    let report = is_ulrich_split(&e)?;
    let failures = report.failures();
    rec.push(
        "ulrich vanishing",
        format!("H^q(E(-s)) = 0 for 1 <= s <= {n}"),
        if failures.is_empty() {
            "all zero".to_string()
        } else {
            format!("nonzero slots {failures:?}")
        },
        report.ulrich,
    );

    let class = e.chern()?;
    let ring = class.ring().clone();
    let degree = CohClass::hyperplane(&ring).pow(n).integrate();
    let h0 = e.h0()?;
    let expected_h0 = &degree * r;
    rec.push(
        "sections",
        format!("h^0(E) = r deg X = {r} * {degree}"),
        h0.to_string(),
        h0 == expected_h0,
    );

    let top = class.c(1).pow(n).integrate();
    rec.push("c1^n", "integrate(c_1(E)^n) > 0", top.to_string(), top.is_positive());

    let nu = class.nu();
    rec.push(
        "numerical dimension",
        format!("nu(E) = r + 1 = {}", r + 1),
        nu.to_string(),
        nu == r as i64 + 1,
    );
    Ok(rec)
}

/// A line bundle or a twisted rank-2 bundle entering the resolution on the
/// hyperplane section of `P^2 x P^2`, with the unknown multiplicity naming it.
struct ResolutionTerm {
    unknown: usize,
    sign: i64,
    bundle: BundleClass,
}

const UNKNOWNS: [&str; 4] = ["a", "b", "c", "d"];

/// Runs the numerical part of the classification of non-big Ulrich bundles
/// with `c_1^4 > 0` on `P^2 x P^2`, for each rank in `ranks`.
pub fn theorem3_pipeline(ranks: RangeInclusive<usize>) -> Result<DeductionRecord, ProductsError> {
    if *ranks.start() < 1 || *ranks.end() > 16 {
        return Err(ProductsError::Range("ranks must lie in 1..=16".into()));
    }
    let ring = Ring::multi(&[2, 2])?;
    let a_cls = CohClass::factor_generator(&ring, 0)?;
    let b_cls = CohClass::factor_generator(&ring, 1)?;
    let h = CohClass::hyperplane(&ring);
    let int = |x: &CohClass| x.integrate();

    // G_i(1) = p_i^* Ω(1) ⊗ O(1), and the two line bundles
    let omega1 = twisted_forms(2, 1, 1)?;
    let g1 = omega1.pullback(&ring, 0)?.twist(&h)?;
    let g2 = omega1.pullback(&ring, 1)?.twist(&h)?;
    let terms = [
        ResolutionTerm { unknown: 0, sign: 1, bundle: g2 },
        ResolutionTerm { unknown: 1, sign: 1, bundle: g1 },
        ResolutionTerm { unknown: 2, sign: -1, bundle: BundleClass::line(&b_cls)? },
        ResolutionTerm { unknown: 3, sign: -1, bundle: BundleClass::line(&a_cls)? },
    ];

    let mut rec = DeductionRecord::new("thm4");
    let curve_degree = int(&h.pow(4));
    rec.push(
        "curve section",
        "deg C = integrate(H^4), genus 1",
        curve_degree.to_string(),
        curve_degree == BigInt::from(6),
    );
    let slope_a = int(&(&a_cls * &h.pow(3)));
    let slope_b = int(&(&b_cls * &h.pow(3)));

    for r in ranks {
        let rb = BigInt::from(r);
        // deg(E|C) = r (deg C + g - 1) for an Ulrich bundle on an elliptic curve
        let deg_c = &rb * &curve_degree;
        let num = &deg_c - &slope_a;
        if !(&num % &slope_b).is_zero() {
            return Err(ProductsError::Deduction(format!("no integral beta at r = {r}")));
        }
        let beta = &num / &slope_b;
        rec.push(
            format!("r={r} degree"),
            format!("{slope_a} + {slope_b} beta = {deg_c}"),
            format!("beta = {beta}"),
            beta == BigInt::from(2 * r as i64 - 1),
        );
        let det = &a_cls + &b_cls.scale(&beta);

        // rows: rank, A-coefficient of c1, B-coefficient of c1
        let mut rows = [[0i64; 4]; 3];
        for t in &terms {
            rows[0][t.unknown] = t.sign * t.bundle.rank() as i64;
            let c1 = t.bundle.c(1);
            rows[1][t.unknown] = t.sign * coefficient(&c1, &[1, 0]);
            rows[2][t.unknown] = t.sign * coefficient(&c1, &[0, 1]);
        }
        let rhs = [r as i64, coefficient(&det, &[1, 0]), coefficient(&det, &[0, 1])];
        rec.push(
            format!("r={r} system"),
            render_system(&rows, &rhs),
            "rank and c1 of the resolution".to_string(),
            true,
        );
        let solutions = solve_nonnegative(&rows, &rhs)
            .map_err(|e| ProductsError::Deduction(format!("r = {r}: {e}")))?;
        let r_i = r as i64;
        let expected = vec![[0, r_i, 1, r_i - 1], [1, r_i - 1, 0, r_i]];
        let a_plus_c = solutions.iter().all(|s| s[0] + s[2] == 1);
        rec.push(
            format!("r={r} solutions"),
            "nonnegative integer solutions, a + c = 1",
            format!("{solutions:?}"),
            a_plus_c && solutions == expected,
        );
        if solutions != expected {
            return Err(ProductsError::Deduction(format!(
                "unexpected solution set {solutions:?} at r = {r}"
            )));
        }

        for (branch, sol) in solutions.iter().enumerate() {
            let mut c = BundleClass::trivial(&ring, 0).chern().clone();
            for t in &terms {
                let k = sol[t.unknown] as usize;
                let part = t.bundle.chern().pow(k);
                c = if t.sign > 0 {
                    &c * &part
                } else {
                    &c * &crate::bundles::invert_unit(&part)
                };
            }
            let c2 = c.component(2);
            let (x, y, z) = (
                coefficient(&c2, &[2, 0]),
                coefficient(&c2, &[1, 1]),
                coefficient(&c2, &[0, 2]),
            );
            // pair with A.H and B.H to read the class on the threefold section
            let pa = int(&(&(&c2 * &a_cls) * &h));
            let pb = int(&(&(&c2 * &b_cls) * &h));
            // A^2 -> (0, 1), AB -> (1, 1), B^2 -> (1, 0); with gamma = 1:
            // delta + eps = pa, 1 + delta = pb
            let delta = &pb - 1;
            let eps = &pa - &delta;
            let consistent = x == 1;
            let label = format!("r={r} branch {} {:?}", branch + 1, sol);
            rec.push(
                format!("{label} c2"),
                format!("c2 = {x} A^2 + {y} AB + {z} B^2; on Y: delta = {delta}, epsilon = {eps}"),
                if consistent {
                    "gamma = 1 holds".to_string()
                } else {
                    format!("gamma = {x} != 1, rank excluded")
                },
                true,
            );
            if !consistent {
                continue;
            }
            let allowed = (branch == 0 && r == 1) || (branch == 1 && r == 2);
            rec.push(
                format!("{label} endpoint"),
                "branch 1 forces r = 1, branch 2 forces r = 2",
                format!("r = {r}"),
                allowed,
            );
            let e = if r == 1 {
                BundleClass::line(&det)?
            } else {
                let c2_cls = &(&a_cls.pow(2) + &(&a_cls * &b_cls).scale(&delta)) + &b_cls.pow(2).scale(&eps);
                BundleClass::new(r, &(&CohClass::one(&ring) + &det) + &c2_cls)?
            };
            let s4 = e.is_big().witness;
            rec.push(
                format!("{label} bigness"),
                format!("det E = {}, c2(E) = {}, s4(E*) > 0", det, e.c(2)),
                format!("s4(E*) = {s4}"),
                s4.is_positive() && (r != 2 || s4 == BigInt::from(6)),
            );
        }
    }
    Ok(rec)
}

/// Coefficient of `t1^e1 t2^e2` as an `i64`.
fn coefficient(x: &CohClass, exps: &[usize]) -> i64 {
    let idx = x.ring().monomial(exps).expect("monomial in range");
    x.coeff(idx).to_i64().expect("small coefficient")
}

fn render_system(rows: &[[i64; 4]; 3], rhs: &[i64; 3]) -> String {
    let eqs: Vec<String> = rows
        .iter()
        .zip(rhs)
        .map(|(row, v)| {
            let mut lhs = String::new();
            for (k, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let sign = if c < 0 { "-" } else if lhs.is_empty() { "" } else { "+" };
                let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
                lhs.push_str(&format!("{sign}{mag}{}", UNKNOWNS[k]));
            }
            format!("{lhs}={v}")
        })
        .collect();
    eqs.join("; ")
}

/// All nonnegative integer solutions of a rank-3 system in four unknowns.
///
/// The solution set is a line; it is bounded by a combination of the rows
/// with nonnegative coefficients on every unknown, which is found by search
/// over small multipliers.
fn solve_nonnegative(rows: &[[i64; 4]; 3], rhs: &[i64; 3]) -> Result<Vec<[i64; 4]>, String> {
    let mut bound = None;
    'search: for u in -3i64..=3 {
        for v in -3i64..=3 {
            for w in -3i64..=3 {
                let comb: Vec<i64> = (0..4).map(|k| u * rows[0][k] + v * rows[1][k] + w * rows[2][k]).collect();
                let total = u * rhs[0] + v * rhs[1] + w * rhs[2];
                let zeros = comb.iter().filter(|&&c| c == 0).count();
                if comb.iter().all(|&c| c >= 0) && zeros <= 2 && total >= 0 {
                    // each unknown with positive weight is at most `total`
                    bound = Some((comb, total));
                    break 'search;
                }
            }
        }
    }
    let (comb, total) = bound.ok_or("no bounding combination of the equations")?;
    // unknowns with positive weight are bounded; solve the others from the rows
    let bounded: Vec<usize> = (0..4).filter(|&k| comb[k] > 0).collect();
    let free: Vec<usize> = (0..4).filter(|&k| comb[k] == 0).collect();
    let mut out = Vec::new();
    let limits: Vec<i64> = bounded.iter().map(|&k| total / comb[k]).collect();
    let mut idx = vec![0i64; bounded.len()];
    loop {
        let mut x = [0i64; 4];
        for (slot, &k) in bounded.iter().enumerate() {
            x[k] = idx[slot];
        }
        if let Some(sol) = complete(rows, rhs, x, &free) {
            out.push(sol);
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                out.sort_unstable();
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] <= limits[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Solves the rows for the `free` unknowns given the others; returns the
/// full vector if it is a nonnegative integer solution.
fn complete(rows: &[[i64; 4]; 3], rhs: &[i64; 3], x: [i64; 4], free: &[usize]) -> Option<[i64; 4]> {
    let residual: Vec<i64> = (0..3)
        .map(|i| rhs[i] - (0..4).filter(|k| !free.contains(k)).map(|k| rows[i][k] * x[k]).sum::<i64>())
        .collect();
    let mut x = x;
    match free.len() {
        0 => {}
        1 => {
            let k = free[0];
            let i = (0..3).find(|&i| rows[i][k] != 0)?;
            if residual[i] % rows[i][k] != 0 {
                return None;
            }
            x[k] = residual[i] / rows[i][k];
        }
        _ => {
            let (k, l) = (free[0], free[1]);
            let mut found = false;
            'pairs: for i in 0..3 {
                for j in i + 1..3 {
                    let det = rows[i][k] * rows[j][l] - rows[i][l] * rows[j][k];
                    if det == 0 {
                        continue;
                    }
                    let xk = residual[i] * rows[j][l] - rows[i][l] * residual[j];
                    let xl = rows[i][k] * residual[j] - residual[i] * rows[j][k];
                    if xk % det != 0 || xl % det != 0 {
                        return None;
                    }
                    x[k] = xk / det;
                    x[l] = xl / det;
                    found = true;
                    break 'pairs;
                }
            }
            if !found {
                return None;
            }
        }
    }
    let ok = x.iter().all(|&v| v >= 0)
        && (0..3).all(|i| (0..4).map(|k| rows[i][k] * x[k]).sum::<i64>() == rhs[i]);
    ok.then_some(x)
}
