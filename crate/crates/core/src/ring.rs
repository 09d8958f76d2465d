//! Integral cohomology rings of smooth quadrics `Q_n` and of products of
//! projective spaces `P^{a_1} x ... x P^{a_k}`.
//!
//! Classes are stored densely over a fixed basis ordered by codegree.
//!
//! Quadric basis: `b_i` for `0 <= i <= n`, plus `b'_m` when `n = 2m`.
//! With `m = ceil(n/2)` we have `b_i = h^i` for `i < m` and `h^i = 2 b_i`
//! for `i > m` (for odd `n` also `h^m = 2 b_m`). For even `n` the middle
//! classes are `l = b_m` and `l' = b'_m` with `h^m = l + l'`, and
//!
//! * `m` even: `l^2 = l'^2 = b_n`, `l l' = 0`;
//! * `m` odd:  `l^2 = l'^2 = 0`,  `l l' = b_n`.
//!
//! The point class `b_n` integrates to 1, so `deg Q_n = 2`.
//!
//! Multiprojective basis: monomials `t_1^{e_1} ... t_k^{e_k}` with
//! `e_i <= a_i`, truncated by `t_i^{a_i + 1} = 0`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest total dimension accepted by [`Ring::new`].
pub const DEFAULT_MAX_DIM: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("ring of dimension {dim} exceeds the supported envelope ({max})")]
    TooLarge { dim: usize, max: usize },
    #[error("ring mismatch: {left} vs {right}")]
    Mismatch {
        left: RingDescriptor,
        right: RingDescriptor,
    },
    #[error("structure constant error: {0}")]
    StructureConstant(String),
    #[error("unknown basis key {key:?} for {ring}")]
    UnknownKey { key: String, ring: RingDescriptor },
    #[error("class is not homogeneous of codegree {0}")]
    NotHomogeneous(usize),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingDescriptor {
    #[serde(rename = "quadric")]
    Quadric { n: usize },
    #[serde(rename = "multiprojective")]
    MultiProjective { dims: Vec<usize> },
}

impl RingDescriptor {
    pub fn quadric(n: usize) -> Self {
        RingDescriptor::Quadric { n }
    }

    pub fn multi(dims: &[usize]) -> Self {
        RingDescriptor::MultiProjective {
            dims: dims.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            RingDescriptor::Quadric { n } => *n,
            RingDescriptor::MultiProjective { dims } => dims.iter().sum(),
        }
    }

    pub fn validate(&self) -> Result<(), RingError> {
        match self {
            RingDescriptor::Quadric { n } if *n < 2 => Err(RingError::InvalidDescriptor(format!(
                "quadric dimension must be at least 2, got {n}"
            ))),
            RingDescriptor::MultiProjective { dims } if dims.is_empty() => Err(
                RingError::InvalidDescriptor("product needs at least one factor".into()),
            ),
            RingDescriptor::MultiProjective { dims } if dims.contains(&0) => Err(
                RingError::InvalidDescriptor("every factor must have dimension >= 1".into()),
            ),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Quadric { n } => write!(f, "Q_{n}"),
            RingDescriptor::MultiProjective { dims } => {
                let parts: Vec<String> = dims.iter().map(|a| format!("P^{a}")).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

/// One of the two families of maximal linear subspaces of an even quadric,
/// named after the middle class it contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// The family whose members have class `l = b_m`.
    First,
    /// The family whose members have class `l' = b'_m`.
    Second,
}

impl Family {
    pub fn other(self) -> Family {
        match self {
            Family::First => Family::Second,
            Family::Second => Family::First,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Basis {
    Quadric { deg: usize, prime: bool },
    Monomial(Vec<usize>),
}

#[derive(Debug)]
pub struct Ring {
    desc: RingDescriptor,
    basis: Vec<Basis>,
    codegrees: Vec<usize>,
    starts: Vec<usize>,
    // mixed-radix code of an exponent vector -> basis index
    monomial_index: Vec<usize>,
    radix: Vec<usize>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}

impl Eq for Ring {}

fn ring_cache() -> &'static Mutex<HashMap<RingDescriptor, Arc<Ring>>> {
    static CACHE: OnceLock<Mutex<HashMap<RingDescriptor, Arc<Ring>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Ring {
    /// Builds (or fetches from the shared cache) the ring for `desc`,
    /// rejecting total dimension above [`DEFAULT_MAX_DIM`].
    pub fn new(desc: RingDescriptor) -> Result<Arc<Ring>, RingError> {
        Ring::with_max_dim(desc, DEFAULT_MAX_DIM)
    }

    pub fn with_max_dim(desc: RingDescriptor, max_dim: usize) -> Result<Arc<Ring>, RingError> {
        desc.validate()?;
        let dim = desc.dim();
        if dim > max_dim {
            return Err(RingError::TooLarge { dim, max: max_dim });
        }
        let mut cache = ring_cache().lock().expect("ring cache poisoned");
        if let Some(r) = cache.get(&desc) {
            return Ok(Arc::clone(r));
        }
        let ring = Arc::new(Ring::build(desc.clone()));
        cache.insert(desc, Arc::clone(&ring));
        Ok(ring)
    }

    pub fn quadric(n: usize) -> Result<Arc<Ring>, RingError> {
        Ring::new(RingDescriptor::quadric(n))
    }

    pub fn multi(dims: &[usize]) -> Result<Arc<Ring>, RingError> {
        Ring::new(RingDescriptor::multi(dims))
    }

    fn build(desc: RingDescriptor) -> Ring {
        let mut basis = Vec::new();
        let mut monomial_index = Vec::new();
        let mut radix = Vec::new();
        match &desc {
            RingDescriptor::Quadric { n } => {
                for d in 0..=*n {
                    basis.push(Basis::Quadric { deg: d, prime: false });
                    if n % 2 == 0 && d == n / 2 {
                        basis.push(Basis::Quadric { deg: d, prime: true });
                    }
                }
            }
            RingDescriptor::MultiProjective { dims } => {
                radix = dims.iter().map(|a| a + 1).collect();
                let total: usize = radix.iter().product();
                let mut monos: Vec<Vec<usize>> = (0..total)
                    .map(|code| decode(code, &radix))
                    .collect();
                monos.sort_by(|x, y| {
                    let dx: usize = x.iter().sum();
                    let dy: usize = y.iter().sum();
                    dx.cmp(&dy).then_with(|| y.cmp(x))
                });
                monomial_index = vec![0; total];
                for (i, e) in monos.iter().enumerate() {
                    monomial_index[encode(e, &radix)] = i;
                }
                basis = monos.into_iter().map(Basis::Monomial).collect();
            }
        }
        let codegrees: Vec<usize> = basis
            .iter()
            .map(|b| match b {
                Basis::Quadric { deg, .. } => *deg,
                Basis::Monomial(e) => e.iter().sum(),
            })
            .collect();
        let dim = desc.dim();
        let mut starts = vec![0; dim + 2];
        for d in 0..=dim + 1 {
            starts[d] = codegrees.iter().take_while(|&&c| c < d).count();
        }
        Ring {
            desc,
            basis,
            codegrees,
            starts,
            monomial_index,
            radix,
        }
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.desc
    }

    pub fn dim(&self) -> usize {
        self.desc.dim()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn codegree(&self, idx: usize) -> usize {
        self.codegrees[idx]
    }

    /// Basis indices of codegree `d`.
    pub fn indices_of_codegree(&self, d: usize) -> std::ops::Range<usize> {
        if d > self.dim() {
            return self.basis.len()..self.basis.len();
        }
        self.starts[d]..self.starts[d + 1]
    }

    /// Serialization key of basis element `idx`.
    pub fn key(&self, idx: usize) -> String {
        match &self.basis[idx] {
            Basis::Quadric { deg, prime: false } => format!("b{deg}"),
            Basis::Quadric { deg, prime: true } => format!("bp{deg}"),
            Basis::Monomial(e) => e
                .iter()
                .enumerate()
                .map(|(i, a)| format!("t{}^{}", i + 1, a))
                .collect::<Vec<_>>()
                .join("*"),
        }
    }

    pub fn index_of_key(&self, key: &str) -> Result<usize, RingError> {
        let unknown = || RingError::UnknownKey {
            key: key.to_string(),
            ring: self.desc.clone(),
        };
        match &self.desc {
            RingDescriptor::Quadric { n } => {
                let (prime, digits) = if let Some(rest) = key.strip_prefix("bp") {
                    (true, rest)
                } else if let Some(rest) = key.strip_prefix('b') {
                    (false, rest)
                } else {
                    return Err(unknown());
                };
                let deg: usize = digits.parse().map_err(|_| unknown())?;
                if deg > *n || (prime && (n % 2 != 0 || deg != n / 2)) {
                    return Err(unknown());
                }
                Ok(self.quadric_index(deg, prime))
            }
            RingDescriptor::MultiProjective { dims } => {
                let parts: Vec<&str> = key.split('*').collect();
                if parts.len() != dims.len() {
                    return Err(unknown());
                }
                let mut exps = Vec::with_capacity(dims.len());
                for (i, part) in parts.iter().enumerate() {
                    let prefix = format!("t{}^", i + 1);
                    let e: usize = part
                        .strip_prefix(prefix.as_str())
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(unknown)?;
                    if e > dims[i] {
                        return Err(unknown());
                    }
                    exps.push(e);
                }
                Ok(self.monomial_index[encode(&exps, &self.radix)])
            }
        }
    }

    fn quadric_index(&self, deg: usize, prime: bool) -> usize {
        let n = self.dim();
        if n % 2 == 0 && (deg > n / 2 || (deg == n / 2 && prime)) {
            deg + 1
        } else {
            deg
        }
    }

    /// Index of the monomial with the given exponents (multiprojective rings).
    pub fn monomial(&self, exps: &[usize]) -> Option<usize> {
        match &self.desc {
            RingDescriptor::MultiProjective { dims } => {
                if exps.len() != dims.len() || exps.iter().zip(dims).any(|(e, a)| e > a) {
                    return None;
                }
                Some(self.monomial_index[encode(exps, &self.radix)])
            }
            RingDescriptor::Quadric { .. } => None,
        }
    }

    /// Multiplies two basis elements, feeding `(target index, coefficient)`
    /// pairs to `emit`.
    fn basis_product(
        &self,
        i: usize,
        j: usize,
        mut emit: impl FnMut(usize, i64),
    ) -> Result<(), RingError> {
        match (&self.basis[i], &self.basis[j]) {
            (Basis::Monomial(x), Basis::Monomial(y)) => {
                let dims = match &self.desc {
                    RingDescriptor::MultiProjective { dims } => dims,
                    RingDescriptor::Quadric { .. } => unreachable!(),
                };
                let mut z = Vec::with_capacity(x.len());
                for ((a, b), bound) in x.iter().zip(y).zip(dims) {
                    if a + b > *bound {
                        return Ok(());
                    }
                    z.push(a + b);
                }
                emit(self.monomial_index[encode(&z, &self.radix)], 1);
                Ok(())
            }
            (
                &Basis::Quadric { deg: d1, prime: p1 },
                &Basis::Quadric { deg: d2, prime: p2 },
            ) => self.quadric_product(d1, p1, d2, p2, &mut emit),
            _ => unreachable!("mixed basis kinds in one ring"),
        }
    }

    fn quadric_product(
        &self,
        d1: usize,
        p1: bool,
        d2: usize,
        p2: bool,
        emit: &mut impl FnMut(usize, i64),
    ) -> Result<(), RingError> {
        let n = self.dim();
        let k = d1 + d2;
        if k > n {
            return Ok(());
        }
        let even = n % 2 == 0;
        let m = n.div_ceil(2);
        let is_mid = |d: usize| even && d == m;
        match (is_mid(d1), is_mid(d2)) {
            (true, true) => {
                let same = p1 == p2;
                if same == (m % 2 == 0) {
                    emit(self.quadric_index(n, false), 1);
                }
                Ok(())
            }
            (true, false) | (false, true) => {
                let (prime, other) = if is_mid(d1) { (p1, d2) } else { (p2, d1) };
                if other == 0 {
                    emit(self.quadric_index(m, prime), 1);
                } else {
                    // h^d . l is the class of an (m-d)-plane
                    emit(self.quadric_index(m + other, false), 1);
                }
                Ok(())
            }
            (false, false) => {
                let weight = |d: usize| if d < m { 1i64 } else { 2 };
                let den = weight(d1) * weight(d2);
                let num: i64 = if k < m || (even && k == m) { 1 } else { 2 };
                if num % den != 0 {
                    return Err(RingError::StructureConstant(format!(
                        "b{d1}*b{d2} on Q_{n} forces coefficient {num}/{den}"
                    )));
                }
                let c = num / den;
                if even && k == m {
                    emit(self.quadric_index(m, false), c);
                    emit(self.quadric_index(m, true), c);
                } else {
                    emit(self.quadric_index(k, false), c);
                }
                Ok(())
            }
        }
    }
}

fn decode(mut code: usize, radix: &[usize]) -> Vec<usize> {
    radix
        .iter()
        .map(|r| {
            let e = code % r;
            code /= r;
            e
        })
        .collect()
}

fn encode(exps: &[usize], radix: &[usize]) -> usize {
    exps.iter()
        .zip(radix)
        .rev()
        .fold(0, |acc, (e, r)| acc * r + e)
}

/// An element of a cohomology ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    ring: Arc<Ring>,
    coeffs: Vec<BigInt>,
}

impl CohClass {
    pub fn zero(ring: &Arc<Ring>) -> CohClass {
        CohClass {
            ring: Arc::clone(ring),
            coeffs: vec![BigInt::zero(); ring.rank()],
        }
    }

    pub fn one(ring: &Arc<Ring>) -> CohClass {
        CohClass::basis(ring, 0)
    }

    pub fn integer(ring: &Arc<Ring>, value: impl Into<BigInt>) -> CohClass {
        let mut c = CohClass::zero(ring);
        c.coeffs[0] = value.into();
        c
    }

    pub fn basis(ring: &Arc<Ring>, idx: usize) -> CohClass {
        let mut c = CohClass::zero(ring);
        c.coeffs[idx] = BigInt::one();
        c
    }

    pub fn from_key(ring: &Arc<Ring>, key: &str) -> Result<CohClass, RingError> {
        Ok(CohClass::basis(ring, ring.index_of_key(key)?))
    }

    /// Builds a class from `(key, coefficient)` pairs.
    pub fn from_terms<I, K, V>(ring: &Arc<Ring>, terms: I) -> Result<CohClass, RingError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: Into<BigInt>,
    {
        let mut c = CohClass::zero(ring);
        for (k, v) in terms {
            let idx = ring.index_of_key(k.as_ref())?;
            c.coeffs[idx] += v.into();
        }
        Ok(c)
    }

    /// The hyperplane class: `h` on a quadric, `t_1 + ... + t_k` on a product.
    pub fn hyperplane(ring: &Arc<Ring>) -> CohClass {
        match ring.descriptor() {
            RingDescriptor::Quadric { .. } => CohClass::h_power(ring, 1),
            RingDescriptor::MultiProjective { dims } => {
                let mut c = CohClass::zero(ring);
                for j in 0..dims.len() {
                    c.coeffs[factor_generator(ring, j)] += 1;
                }
                c
            }
        }
    }

    /// `h^k` written in the quadric basis; on a product, `(t_1+...+t_k)^k`.
    pub fn h_power(ring: &Arc<Ring>, k: usize) -> CohClass {
        match ring.descriptor() {
            RingDescriptor::Quadric { n } => {
                let n = *n;
                let mut c = CohClass::zero(ring);
                if k > n {
                    return c;
                }
                let m = n.div_ceil(2);
                if n % 2 == 0 && k == m {
                    c.coeffs[ring.quadric_index(m, false)] = BigInt::one();
                    c.coeffs[ring.quadric_index(m, true)] = BigInt::one();
                } else if k < m {
                    c.coeffs[ring.quadric_index(k, false)] = BigInt::one();
                } else {
                    c.coeffs[ring.quadric_index(k, false)] = BigInt::from(2);
                }
                c
            }
            RingDescriptor::MultiProjective { .. } => CohClass::hyperplane(ring).pow(k),
        }
    }

    /// The generator `t_j` (0-based `j`) of a multiprojective ring.
    pub fn factor_generator(ring: &Arc<Ring>, j: usize) -> Result<CohClass, RingError> {
        match ring.descriptor() {
            RingDescriptor::MultiProjective { dims } if j < dims.len() => {
                Ok(CohClass::basis(ring, factor_generator(ring, j)))
            }
            _ => Err(RingError::Unsupported(format!(
                "no factor generator t{} on {}",
                j + 1,
                ring.descriptor()
            ))),
        }
    }

    /// The middle classes `(l, l')` of an even quadric.
    pub fn middle_classes(ring: &Arc<Ring>) -> Result<(CohClass, CohClass), RingError> {
        match ring.descriptor() {
            RingDescriptor::Quadric { n } if n % 2 == 0 => {
                let m = n / 2;
                Ok((
                    CohClass::basis(ring, ring.quadric_index(m, false)),
                    CohClass::basis(ring, ring.quadric_index(m, true)),
                ))
            }
            d => Err(RingError::Unsupported(format!(
                "{d} has no pair of middle classes"
            ))),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Image under the automorphism of an even quadric exchanging the two
    /// families of maximal linear subspaces (`l <-> l'`). Identity on any
    /// other ring.
    pub fn swap_middle(&self) -> CohClass {
        let mut out = self.clone();
        if let RingDescriptor::Quadric { n } = self.descriptor() {
            if n % 2 == 0 {
                let m = n / 2;
                out.coeffs
                    .swap(self.ring.quadric_index(m, false), self.ring.quadric_index(m, true));
            }
        }
        out
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        self.ring.descriptor()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, idx: usize) -> &BigInt {
        &self.coeffs[idx]
    }

    pub fn coeff_of(&self, key: &str) -> Result<&BigInt, RingError> {
        Ok(&self.coeffs[self.ring.index_of_key(key)?])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `(key, coefficient)` for every nonzero coefficient, in basis order.
    pub fn terms(&self) -> Vec<(String, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.ring.key(i), c.clone()))
            .collect()
    }

    pub fn same_ring(&self, other: &CohClass) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::Mismatch {
                left: self.descriptor().clone(),
                right: other.descriptor().clone(),
            })
        }
    }

    /// The codegree-`d` homogeneous part.
    pub fn component(&self, d: usize) -> CohClass {
        let mut c = CohClass::zero(&self.ring);
        for i in self.ring.indices_of_codegree(d) {
            c.coeffs[i] = self.coeffs[i].clone();
        }
        c
    }

    /// Highest codegree with a nonzero coefficient.
    pub fn top_codegree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.ring.codegree(i))
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.ring.codegree(i) == d)
    }

    pub fn scale(&self, k: &BigInt) -> CohClass {
        CohClass {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Divides every coefficient by `k`, or returns `None` if some
    /// coefficient is not divisible.
    pub fn exact_div(&self, k: &BigInt) -> Option<CohClass> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !(c % k).is_zero() {
                return None;
            }
            coeffs.push(c / k);
        }
        Some(CohClass {
            ring: Arc::clone(&self.ring),
            coeffs,
        })
    }

    pub fn checked_add(&self, other: &CohClass) -> Result<CohClass, RingError> {
        self.same_ring(other)?;
        Ok(CohClass {
            ring: Arc::clone(&self.ring),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &CohClass) -> Result<CohClass, RingError> {
        self.checked_add(&-other)
    }

    /// Ring product, truncated above the top codegree.
    pub fn checked_mul(&self, other: &CohClass) -> Result<CohClass, RingError> {
        self.same_ring(other)?;
        let dim = self.ring.dim();
        let mut out = vec![BigInt::zero(); self.ring.rank()];
        let lhs: Vec<(usize, &BigInt)> = nonzero(&self.coeffs);
        let rhs: Vec<(usize, &BigInt)> = nonzero(&other.coeffs);
        for &(i, x) in &lhs {
            let di = self.ring.codegree(i);
            for &(j, y) in &rhs {
                if di + self.ring.codegree(j) > dim {
                    continue;
                }
                let xy = x * y;
                self.ring.basis_product(i, j, |k, c| {
                    if c == 1 {
                        out[k] += &xy;
                    } else {
                        out[k] += &xy * c;
                    }
                })?;
            }
        }
        Ok(CohClass {
            ring: Arc::clone(&self.ring),
            coeffs: out,
        })
    }

    pub fn pow(&self, k: usize) -> CohClass {
        let mut acc = CohClass::one(&self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Degree of the zero-cycle part: coefficient of the point class.
    pub fn integrate(&self) -> BigInt {
        self.coeffs[self.ring.rank() - 1].clone()
    }
}

fn nonzero(v: &[BigInt]) -> Vec<(usize, &BigInt)> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
}

fn factor_generator(ring: &Ring, j: usize) -> usize {
    let k = ring.radix.len();
    let mut e = vec![0; k];
    e[j] = 1;
    ring.monomial_index[encode(&e, &ring.radix)]
}

/// Monomial keys without `^0` factors and `^1` exponents; other keys as is.
fn display_name(key: &str) -> String {
    if !key.starts_with('t') {
        return key.to_string();
    }
    key.split('*')
        .filter(|p| !p.ends_with("^0"))
        .map(|p| p.strip_suffix("^1").unwrap_or(p))
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, c) in terms {
            let key = display_name(&key);
            let unit = key == "b0" || key.is_empty();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if unit {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{key}")?;
            } else {
                write!(f, "{mag}*{key}")?;
            }
        }
        Ok(())
    }
}

// Operator impls panic on ring mismatch; use the checked_* methods where the
// operands come from untrusted input.

impl Add for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl AddAssign<&CohClass> for CohClass {
    fn add_assign(&mut self, rhs: &CohClass) {
        self.same_ring(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        CohClass {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CohClass {
    type Output = CohClass;
    fn mul(self, rhs: &CohClass) -> CohClass {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Pullback along a maximal linear subspace `P^m` of `Q_{2m}` belonging to
/// `family`.
pub fn restrict_to_linear(x: &CohClass, family: Family) -> Result<CohClass, RingError> {
    let n = match x.descriptor() {
        RingDescriptor::Quadric { n } if n % 2 == 0 => *n,
        d => {
            return Err(RingError::Unsupported(format!(
                "restriction to a maximal linear space needs an even quadric, got {d}"
            )))
        }
    };
    let m = n / 2;
    let target = Ring::with_max_dim(RingDescriptor::multi(&[m]), m)?;
    let mut out = CohClass::zero(&target);
    // m even: a member of a family meets its own class once;
    // m odd: it meets the class of the other family once.
    let sees_first = (family == Family::First) == (m % 2 == 0);
    for (i, c) in x.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (deg, prime) = match x.ring.basis[i] {
            Basis::Quadric { deg, prime } => (deg, prime),
            Basis::Monomial(_) => unreachable!(),
        };
        let keep = if deg < m {
            true
        } else if deg == m {
            prime != sees_first
        } else {
            false
        };
        if keep {
            out.coeffs[target.monomial_index[deg]] += c;
        }
    }
    Ok(out)
}

/// Pullback along a smooth hyperplane section `Q_{2m-1} ⊂ Q_{2m}`.
pub fn restrict_to_hyperplane_quadric(x: &CohClass) -> Result<CohClass, RingError> {
    let n = match x.descriptor() {
        RingDescriptor::Quadric { n } if n % 2 == 0 && *n >= 4 => *n,
        d => {
            return Err(RingError::Unsupported(format!(
                "hyperplane restriction needs an even quadric of dimension >= 4, got {d}"
            )))
        }
    };
    let target = Ring::with_max_dim(RingDescriptor::quadric(n - 1), n - 1)?;
    let mut out = CohClass::zero(&target);
    for (i, c) in x.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let deg = x.ring.codegree(i);
        if deg < n {
            out.coeffs[target.quadric_index(deg, false)] += c;
        }
    }
    Ok(out)
}

/// Pullback of a class on `P^a` along the projection onto factor `j` of a
/// multiprojective ring (`t^e -> t_j^e`).
pub fn pullback_from_factor(
    x: &CohClass,
    target: &Arc<Ring>,
    j: usize,
) -> Result<CohClass, RingError> {
    let a = match x.descriptor() {
        RingDescriptor::MultiProjective { dims } if dims.len() == 1 => dims[0],
        d => {
            return Err(RingError::Unsupported(format!(
                "pullback source must be a single projective space, got {d}"
            )))
        }
    };
    let dims = match target.descriptor() {
        RingDescriptor::MultiProjective { dims } if j < dims.len() && dims[j] == a => dims.clone(),
        d => {
            return Err(RingError::Unsupported(format!(
                "cannot pull back from P^{a} along factor {} of {d}",
                j + 1
            )))
        }
    };
    let mut out = CohClass::zero(target);
    for (e, c) in x.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut exps = vec![0; dims.len()];
        exps[j] = x.ring.codegree(e);
        out.coeffs[target.monomial_index[encode(&exps, &target.radix)]] += c;
    }
    Ok(out)
}

/// Coefficient value in JSON: a number when it fits in `i64`, a decimal
/// string otherwise.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub(crate) enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    pub(crate) fn into_bigint<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(v)),
            JsonInt::Big(s) => s
                .parse()
                .map_err(|_| E::custom(format!("invalid integer {s:?}"))),
        }
    }
}

pub(crate) fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// Serializer adaptor for the `coeffs` map of a class.
pub(crate) struct CoeffMap<'a>(pub &'a CohClass);

impl Serialize for CoeffMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Num<'b>(&'b BigInt);
        impl Serialize for Num<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_bigint(self.0, s)
            }
        }
        let terms: Vec<(usize, &BigInt)> = nonzero(&self.0.coeffs);
        let mut map = s.serialize_map(Some(terms.len()))?;
        for (i, c) in terms {
            map.serialize_entry(&self.0.ring.key(i), &Num(c))?;
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(transparent)]
pub(crate) struct RawCoeffs(BTreeMap<String, JsonInt>);

impl RawCoeffs {
    pub(crate) fn into_class<E: serde::de::Error>(self, ring: &Arc<Ring>) -> Result<CohClass, E> {
        let mut c = CohClass::zero(ring);
        for (k, v) in self.0 {
            let idx = ring.index_of_key(&k).map_err(E::custom)?;
            c.coeffs[idx] += v.into_bigint::<E>()?;
        }
        Ok(c)
    }
}

impl Serialize for CohClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("ring", self.descriptor())?;
        map.serialize_entry("coeffs", &CoeffMap(self))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for CohClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            ring: RingDescriptor,
            coeffs: RawCoeffs,
        }
        let raw = Raw::deserialize(d)?;
        let ring = Ring::new(raw.ring).map_err(D::Error::custom)?;
        raw.coeffs.into_class(&ring)
    }
}
